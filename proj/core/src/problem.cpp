#include "skeptic/problem.hpp"

#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "skeptic/errors.hpp"
#include "skeptic/rng.hpp"
#include "skeptic/text.hpp"

namespace skeptic {

using nlohmann::json;

std::string to_string(Difficulty d) {
  switch (d) {
    case Difficulty::easy: return "easy";
    case Difficulty::medium: return "medium";
    case Difficulty::hard: return "hard";
    case Difficulty::unknown: return "unknown";
  }
  return "unknown";
}

Difficulty difficulty_from_string(const std::string& s) {
  if (s == "easy") return Difficulty::easy;
  if (s == "medium") return Difficulty::medium;
  if (s == "hard") return Difficulty::hard;
  if (s == "unknown") return Difficulty::unknown;
  throw ValidationError("unknown difficulty: " + s);
}

std::vector<TestCase> Problem::all_tests() const {
  std::vector<TestCase> all = public_tests;
  all.insert(all.end(), private_tests.begin(), private_tests.end());
  return all;
}

const Problem* ProblemSet::find(const std::string& id) const {
  for (const auto& p : problems) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

namespace {

std::vector<TestCase> tests_from_json(const json& arr, long line_number,
                                      const char* field) {
  if (!arr.is_array()) {
    throw ParseError(std::string(field) + " must be an array", line_number);
  }
  std::vector<TestCase> tests;
  tests.reserve(arr.size());
  for (const auto& t : arr) {
    if (!t.is_object() || !t.contains("input") || !t.contains("output") ||
        !t["input"].is_string() || !t["output"].is_string()) {
      throw ParseError(std::string(field) + " entries need string input/output",
                       line_number);
    }
    tests.push_back({t["input"].get<std::string>(), t["output"].get<std::string>()});
  }
  return tests;
}

json tests_to_json(const std::vector<TestCase>& tests) {
  json arr = json::array();
  for (const auto& t : tests) arr.push_back({{"input", t.input}, {"output", t.output}});
  return arr;
}

}  // namespace

Problem problem_from_json_line(const std::string& line, long line_number) {
  json record;
  try {
    record = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON record: ") + e.what(), line_number);
  }
  if (!record.is_object()) throw ParseError("record is not an object", line_number);

  Problem p;
  if (!record.contains("id") || !record["id"].is_string() ||
      record["id"].get<std::string>().empty()) {
    throw ParseError("missing or empty \"id\"", line_number);
  }
  p.id = record["id"].get<std::string>();
  if (!record.contains("statement") || !record["statement"].is_string()) {
    throw ParseError("missing \"statement\"", line_number);
  }
  p.statement = record["statement"].get<std::string>();
  if (record.contains("difficulty")) {
    if (!record["difficulty"].is_string()) {
      throw ParseError("\"difficulty\" must be a string", line_number);
    }
    try {
      p.difficulty = difficulty_from_string(record["difficulty"].get<std::string>());
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), line_number);
    }
  }
  p.public_tests = tests_from_json(record.value("public_tests", json::array()),
                                   line_number, "public_tests");
  p.private_tests = tests_from_json(record.value("private_tests", json::array()),
                                    line_number, "private_tests");
  if (record.contains("time_limit_ms")) {
    if (!record["time_limit_ms"].is_number_integer() ||
        record["time_limit_ms"].get<std::int64_t>() <= 0) {
      throw ParseError("\"time_limit_ms\" must be a positive integer", line_number);
    }
    p.time_limit_ms = record["time_limit_ms"].get<std::int64_t>();
  }
  if (record.contains("memory_limit_bytes")) {
    if (!record["memory_limit_bytes"].is_number_integer() ||
        record["memory_limit_bytes"].get<std::int64_t>() <= 0) {
      throw ParseError("\"memory_limit_bytes\" must be a positive integer", line_number);
    }
    p.memory_limit_bytes = record["memory_limit_bytes"].get<std::int64_t>();
  }
  return p;
}

std::string problem_to_json_line(const Problem& p) {
  json record;
  record["id"] = p.id;
  record["statement"] = p.statement;
  if (p.difficulty != Difficulty::unknown) record["difficulty"] = to_string(p.difficulty);
  record["public_tests"] = tests_to_json(p.public_tests);
  record["private_tests"] = tests_to_json(p.private_tests);
  record["time_limit_ms"] = p.time_limit_ms;
  record["memory_limit_bytes"] = p.memory_limit_bytes;
  return record.dump();
}

ProblemSet load_problems(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open problem file: " + path);

  ProblemSet set;
  set.source = path;
  std::unordered_set<std::string> seen;
  std::string line;
  long line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    Problem p = problem_from_json_line(line, line_number);
    if (!seen.insert(p.id).second) {
      throw ValidationError("duplicate problem id \"" + p.id + "\" at line " +
                            std::to_string(line_number));
    }
    set.problems.push_back(std::move(p));
  }
  return set;
}

void save_problems(const ProblemSet& set, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write problem file: " + path);
  for (const auto& p : set.problems) out << problem_to_json_line(p) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

namespace {

bool io_fits(const TestCase& t, std::size_t max_io_tokens) {
  return approx_token_length(t.input) <= max_io_tokens &&
         approx_token_length(t.output) <= max_io_tokens;
}

}  // namespace

bool is_suitable(const Problem& p, std::size_t min_tests, std::size_t max_io_tokens) {
  std::size_t qualifying = 0;
  for (const auto& t : p.public_tests) qualifying += io_fits(t, max_io_tokens);
  for (const auto& t : p.private_tests) qualifying += io_fits(t, max_io_tokens);
  return qualifying >= min_tests;
}

Problem sample_tests(const Problem& p, std::size_t extra_cap, std::uint64_t rng_seed,
                     std::size_t max_io_tokens) {
  // Indices into the public..private concatenation that exceed the size cap.
  std::vector<std::size_t> oversized;
  std::size_t total = p.public_tests.size() + p.private_tests.size();
  for (std::size_t i = 0; i < total; ++i) {
    const TestCase& t = i < p.public_tests.size()
                            ? p.public_tests[i]
                            : p.private_tests[i - p.public_tests.size()];
    if (!io_fits(t, max_io_tokens)) oversized.push_back(i);
  }

  std::size_t draw = std::min(extra_cap, oversized.size());
  Rng rng(rng_seed);
  // Partial Fisher-Yates: the first `draw` entries are the sample.
  for (std::size_t i = 0; i < draw; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.bounded(oversized.size() - i));
    std::swap(oversized[i], oversized[j]);
  }
  std::unordered_set<std::size_t> kept_oversized(oversized.begin(), oversized.begin() + draw);

  Problem out = p;
  out.public_tests.clear();
  out.private_tests.clear();
  for (std::size_t i = 0; i < total; ++i) {
    const TestCase& t = i < p.public_tests.size()
                            ? p.public_tests[i]
                            : p.private_tests[i - p.public_tests.size()];
    if (io_fits(t, max_io_tokens) || kept_oversized.count(i)) {
      if (i < p.public_tests.size()) {
        out.public_tests.push_back(t);
      } else {
        out.private_tests.push_back(t);
      }
    }
  }
  return out;
}

}  // namespace skeptic
