#include "ergoalloc/trajectory.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

#include "ergoalloc/errors.hpp"
#include "ergoalloc/text.hpp"

namespace ergoalloc {

namespace {

constexpr const char* kAxes[] = {"x", "y", "z"};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::vector<int> line_numbers;
};

Table read_table(std::istream& in, const std::string& source) {
  Table t;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    auto fields = split(s, ',');
    if (t.header.empty()) {
      t.header = std::move(fields);
      continue;
    }
    if (fields.size() != t.header.size())
      throw ParseError(source + ":" + std::to_string(n) + ": expected " + std::to_string(t.header.size()) +
                       " fields, got " + std::to_string(fields.size()));
    std::vector<double> row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      try {
        std::size_t used = 0;
        double v = std::stod(fields[i], &used);
        if (used != fields[i].size() || !std::isfinite(v)) throw std::invalid_argument("trailing");
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError(source + ":" + std::to_string(n) + ": field '" + t.header[i] + "' is not a number");
      }
    }
    t.rows.push_back(std::move(row));
    t.line_numbers.push_back(n);
  }
  if (t.header.empty()) throw ParseError(source + ": missing header row");
  return t;
}

std::optional<std::size_t> column(const Table& t, const std::string& name) {
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i] == name) return i;
  return std::nullopt;
}

std::size_t require(const Table& t, const std::string& name, const std::string& source) {
  auto c = column(t, name);
  if (!c) throw ParseError(source + ": missing column '" + name + "'");
  return *c;
}

void check_order(const Table& t, std::size_t tcol, const std::string& source) {
  for (std::size_t r = 1; r < t.rows.size(); ++r)
    if (t.rows[r][tcol] < t.rows[r - 1][tcol])
      throw DataError(source + ":" + std::to_string(t.line_numbers[r]) + ": timestamps are not ordered");
}

bool is_scored(const Table& t) { return column(t, "shoulder_score").has_value(); }

Trajectory postures_from(const Table& t, const std::string& source) {
  const auto tcol = require(t, "t_seconds", source);
  PerJoint<std::array<std::size_t, 3>> cols{};
  for (Joint j : kJoints)
    for (int a = 0; a < 3; ++a)
      cols[index(j)][a] = require(t, std::string(to_string(j)) + "_" + kAxes[a], source);
  check_order(t, tcol, source);
  Trajectory out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) {
    PostureSample s;
    s.t = row[tcol];
    for (Joint j : kJoints)
      for (int a = 0; a < 3; ++a) s.q[index(j)].q[a] = row[cols[index(j)][a]];
    out.push_back(s);
  }
  return out;
}

}  // namespace

ScoreTrace score_trajectory(const Trajectory& trajectory, const ScoringTable& table) {
  ScoreTrace out;
  out.reserve(trajectory.size());
  for (const auto& p : trajectory) {
    ScoreSample s;
    s.t = p.t;
    for (Joint j : kJoints) s.g[index(j)] = rula_score(table, j, p.q[index(j)]).value();
    out.push_back(s);
  }
  return out;
}

ScoreTrace read_trace(std::istream& in, const ScoringTable& table, const std::string& source) {
  const Table t = read_table(in, source);
  if (!is_scored(t)) return score_trajectory(postures_from(t, source), table);

  const auto tcol = require(t, "t_seconds", source);
  PerJoint<std::size_t> cols{};
  for (Joint j : kJoints) cols[index(j)] = require(t, std::string(to_string(j)) + "_score", source);
  check_order(t, tcol, source);
  ScoreTrace out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    ScoreSample s;
    s.t = t.rows[r][tcol];
    for (Joint j : kJoints) {
      double g = t.rows[r][cols[index(j)]];
      if (g != std::floor(g) || g < RulaScore::kMin || g > RulaScore::kMax)
        throw ParseError(source + ":" + std::to_string(t.line_numbers[r]) + ": score outside 1..6");
      s.g[index(j)] = static_cast<int>(g);
    }
    out.push_back(s);
  }
  return out;
}

ScoreTrace read_trace_file(const std::string& path, const ScoringTable& table) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trajectory file '" + path + "'");
  return read_trace(in, table, path);
}

Trajectory read_trajectory(std::istream& in, const std::string& source) {
  const Table t = read_table(in, source);
  if (is_scored(t)) throw ParseError(source + ": expected joint angles, found pre-scored columns");
  return postures_from(t, source);
}

void write_trajectory(std::ostream& out, const Trajectory& trajectory) {
  out << "t_seconds";
  for (Joint j : kJoints)
    for (const char* a : kAxes) out << ',' << to_string(j) << '_' << a;
  out << '\n';
  for (const auto& s : trajectory) {
    out << fixed(s.t, 3);
    for (Joint j : kJoints)
      for (int a = 0; a < 3; ++a) out << ',' << fixed(s.q[index(j)].q[a], 4);
    out << '\n';
  }
}

void write_scores(std::ostream& out, const ScoreTrace& trace) {
  out << "t_seconds";
  for (Joint j : kJoints) out << ',' << to_string(j) << "_score";
  out << '\n';
  for (const auto& s : trace) {
    out << fixed(s.t, 3);
    for (Joint j : kJoints) out << ',' << s.g[index(j)];
    out << '\n';
  }
}

}  // namespace ergoalloc
