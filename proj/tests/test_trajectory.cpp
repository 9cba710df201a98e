#include <doctest.h>

#include <sstream>

#include "ergoalloc/errors.hpp"
#include "ergoalloc/trajectory.hpp"

using namespace ergoalloc;

namespace {

std::string posture_header() {
  std::string h = "t_seconds";
  for (Joint j : kJoints)
    for (const char* a : {"x", "y", "z"}) h += "," + std::string(to_string(j)) + "_" + a;
  return h;
}

std::string posture_row(double t, double shoulder_y) {
  std::ostringstream s;
  s << t;
  for (Joint j : kJoints)
    for (int a = 0; a < 3; ++a) s << ',' << (j == Joint::shoulder && a == 1 ? shoulder_y : 0.0);
  return s.str();
}

}  // namespace

TEST_CASE("posture files are scored") {
  std::istringstream in("# recorded at 20 Hz\n" + posture_header() + "\n" + posture_row(0, 10) + "\n" +
                        posture_row(0.05, 50) + "\n\n" + posture_row(0.1, 100) + "\n");
  auto trace = read_trace(in, ScoringTable::defaults());
  REQUIRE(trace.size() == 3);
  CHECK(trace[0].g[index(Joint::shoulder)] == 1);
  CHECK(trace[1].g[index(Joint::shoulder)] == 3);
  CHECK(trace[2].g[index(Joint::shoulder)] == 4);
  CHECK(trace[2].t == doctest::Approx(0.1));
  CHECK(trace[1].g[index(Joint::elbow)] == 2);
}

TEST_CASE("posture round trip") {
  Trajectory t(2);
  t[1].t = 0.05;
  t[1].q[index(Joint::neck)].q = {1.5, -12.25, 3.0};
  std::stringstream ss;
  write_trajectory(ss, t);
  auto back = read_trajectory(ss);
  REQUIRE(back.size() == 2);
  CHECK(back[1].t == 0.05);
  CHECK(back[1].q[index(Joint::neck)].q[1] == -12.25);
}

TEST_CASE("pre-scored files") {
  ScoreTrace t(2);
  t[1].t = 1.0;
  t[1].g = {6, 5, 4, 3, 2};
  std::stringstream ss;
  write_scores(ss, t);
  auto back = read_trace(ss, ScoringTable::defaults());
  REQUIRE(back.size() == 2);
  CHECK(back[1].g == t[1].g);

  std::istringstream as_posture("t_seconds,shoulder_score,elbow_score,wrist_score,trunk_score,neck_score\n0,1,1,1,1,1\n");
  CHECK_THROWS_AS(read_trajectory(as_posture), ParseError);
}

TEST_CASE("malformed input") {
  const auto table = ScoringTable::defaults();
  auto parse = [&](const std::string& text) {
    std::istringstream in(text);
    return read_trace(in, table, "input.csv");
  };
  const std::string scored = "t_seconds,shoulder_score,elbow_score,wrist_score,trunk_score,neck_score\n";
  CHECK_THROWS_AS(parse(""), ParseError);
  CHECK_THROWS_AS(parse(scored + "0,1,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse(scored + "0,1,1,x,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse(scored + "0,7,1,1,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse(scored + "0,2.5,1,1,1,1\n"), ParseError);
  CHECK_THROWS_AS(parse("t_seconds,shoulder_x\n0,1\n"), ParseError);
  CHECK_THROWS_AS(parse(scored + "1,1,1,1,1,1\n0.5,1,1,1,1,1\n"), DataError);
  try {
    parse(scored + "0,1,1,x,1,1\n");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("input.csv:2") != std::string::npos);
  }
  CHECK_THROWS_AS(read_trace_file("/nonexistent/trace.csv", table), DataError);
}
