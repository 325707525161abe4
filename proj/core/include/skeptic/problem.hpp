#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace skeptic {

struct TestCase {
  std::string input;   // stdin payload
  std::string output;  // expected stdout

  bool operator==(const TestCase&) const = default;
};

enum class Difficulty { easy, medium, hard, unknown };

std::string to_string(Difficulty d);
Difficulty difficulty_from_string(const std::string& s);

struct Problem {
  std::string id;
  std::string statement;
  Difficulty difficulty = Difficulty::unknown;
  std::vector<TestCase> public_tests;
  std::vector<TestCase> private_tests;
  std::int64_t time_limit_ms = 6000;
  std::int64_t memory_limit_bytes = 512LL * 1024 * 1024;

  /// public_tests followed by private_tests; the order that defines the
  /// case index used by the dense reward.
  std::vector<TestCase> all_tests() const;

  bool operator==(const Problem&) const = default;
};

struct ProblemSet {
  std::vector<Problem> problems;
  std::string source;  // provenance, e.g. the file path it was loaded from

  const Problem* find(const std::string& id) const;
};

/// Loads a JSON Lines problem file. Record order is preserved. Throws
/// IoError for unreadable paths, ParseError (citing the line) for malformed
/// records, ValidationError for duplicate ids.
ProblemSet load_problems(const std::string& path);

/// Writes one JSON record per line. load_problems(save_problems(ps)) == ps.
void save_problems(const ProblemSet& set, const std::string& path);

std::string problem_to_json_line(const Problem& p);
Problem problem_from_json_line(const std::string& line, long line_number = 0);

/// A problem is suitable for refinement training when it has at least
/// `min_tests` cases (public and private counted together) whose input and
/// output are both at most `max_io_tokens` approximate tokens long.
bool is_suitable(const Problem& p, std::size_t min_tests, std::size_t max_io_tokens);

/// Keeps every test case whose input and output both fit in `max_io_tokens`
/// tokens, plus up to `extra_cap` cases sampled without replacement from the
/// oversized remainder. Deterministic for a fixed seed; original case order
/// is preserved.
Problem sample_tests(const Problem& p, std::size_t extra_cap, std::uint64_t rng_seed,
                     std::size_t max_io_tokens = 512);

}  // namespace skeptic
