#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ergoalloc/calibration.hpp"
#include "ergoalloc/errors.hpp"

using namespace ergoalloc;

namespace {

const KWearParams P;

ScoreTrace constant_trace(const PerJoint<int>& g, double seconds) {
  ScoreTrace t;
  for (int k = 0; k <= static_cast<int>(std::lround(seconds / 0.05)); ++k) {
    ScoreSample s;
    s.t = k * 0.05;
    s.g = g;
    t.push_back(s);
  }
  return t;
}

class FixedSource : public ExecutionSource {
 public:
  explicit FixedSource(std::vector<ScoreTrace> runs) : runs_(std::move(runs)) {}
  int available() const override { return static_cast<int>(runs_.size()); }
  ScoreTrace record(int l) const override {
    ++requests;
    REQUIRE(l < available());
    return runs_[l];
  }
  mutable int requests = 0;

 private:
  std::vector<ScoreTrace> runs_;
};

}  // namespace

TEST_CASE("identical executions converge at the minimum count") {
  FixedSource src(std::vector<ScoreTrace>(6, constant_trace({3, 2, 4, 1, 2}, 12.0)));
  auto r = calibrate(src, 2, 6, 1e-3, P);
  CHECK(r.converged);
  CHECK(r.eta == 2);
  CHECK(r.max_error <= 1e-12);
  CHECK(src.requests == 2);
  CHECK(r.entry.alpha[index(Joint::wrist)] == doctest::Approx(std::exp(-4 * 12.0 / P.capacity())).epsilon(1e-9));
  CHECK(r.entry.beta(Joint::wrist) == doctest::Approx(1.0 - r.entry.alpha[index(Joint::wrist)]));
}

TEST_CASE("diverging executions never converge") {
  std::vector<ScoreTrace> runs;
  for (int l = 0; l < 8; ++l) runs.push_back(constant_trace({l % 2 ? 6 : 1, 1, 1, 1, 1}, 30.0));
  FixedSource src(runs);
  auto r = calibrate(src, 2, 20, 1e-3, P);
  CHECK_FALSE(r.converged);
  CHECK_FALSE(r.entry.converged);
  CHECK(r.max_error > 0.1);
  CHECK(src.requests == 8);
}

TEST_CASE("calibration arguments") {
  FixedSource src(std::vector<ScoreTrace>(3, constant_trace({1, 1, 1, 1, 1}, 2.0)));
  CHECK_THROWS_AS(calibrate(src, 1, 5, 1e-3, P), DomainError);
  CHECK_THROWS_AS(calibrate(src, 3, 2, 1e-3, P), DomainError);
  CHECK_THROWS_AS(calibrate(src, 2, 5, 0.0, P), DomainError);
  CHECK_THROWS_AS(calibrate(src, 4, 5, 1e-3, P), DataError);
}

TEST_CASE("profile round trip") {
  CalibrationProfile p;
  CalibrationEntry e;
  e.alpha = {0.5, 0.25, 1.0, 0.125, 0.9};
  e.eta = 3;
  e.max_error = 1e-4;
  p.set("a_1", e);
  e.converged = false;
  p.set("a_2", e);
  std::stringstream ss;
  p.save(ss);
  auto q = CalibrationProfile::load(ss);
  CHECK(q.entries().size() == 2);
  CHECK(q.alpha("a_1", Joint::elbow) == 0.25);
  CHECK(q.entry("a_1").eta == 3);
  CHECK_FALSE(q.entry("a_2").converged);
  CHECK_THROWS_AS(q.entry("a_9"), CalibrationMissing);
}

TEST_CASE("profile errors") {
  CalibrationProfile p;
  CalibrationEntry e;
  e.alpha[0] = 0.0;
  CHECK_THROWS_AS(p.set("x", e), DomainError);
  std::istringstream garbage("{not json");
  CHECK_THROWS_AS(CalibrationProfile::load(garbage), ParseError);
  std::istringstream wrong_schema(R"({"schema": 9, "actions": {}})");
  CHECK_THROWS_AS(CalibrationProfile::load(wrong_schema), ParseError);
  std::istringstream missing_joint(R"({"schema": 1, "actions": {"a": {"alpha": {"neck": 0.5}}}})");
  CHECK_THROWS_AS(CalibrationProfile::load(missing_joint), ParseError);
  CHECK_THROWS_AS(CalibrationProfile::load_file("/nonexistent/profile.json"), DataError);
}
