#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "skeptic/gateway.hpp"
#include "skeptic/judge.hpp"
#include "skeptic/problem.hpp"
#include "skeptic/prompts.hpp"

namespace skeptic {

enum class SampleCategory {
  initial,
  err_WA,
  err_RE,
  err_TLE,
  err_CE,
  err_MLE,
  skep_TP_AC,
  skep_FP_WA,
  skep_FP_RE,
  skep_FP_TLE,
  skep_FP_CE,
  skep_FP_MLE,
};

std::string to_string(SampleCategory c);
SampleCategory sample_category_from_string(const std::string& s);
SampleCategory error_category_for(JudgeStatus status);
SampleCategory skeptic_category_for(const SuiteVerdict& verdict);

/// One RL training record: a problem statement, optional feedback to refine
/// against, and the full (public + private) test suite used for rewards.
struct RefinementSample {
  std::string problem_id;
  std::string statement;
  Feedback feedback;
  std::vector<TestCase> tests;
  SampleCategory category = SampleCategory::initial;
};

struct RLDataset {
  std::vector<RefinementSample> samples;
  std::map<SampleCategory, std::size_t> stats;
};

struct SynthesisOptions {
  double p_pass = 0.2;  // inclusion probability when the generation passes everything
  double p_fail = 0.4;  // inclusion probability when it fails some case
  std::uint64_t seed = 0;
  std::optional<ResourceLimits> limits_override;
  int concurrency = 1;
  RenderOptions render;
};

/// The seeded per-problem inclusion decision used by the skepticism set.
/// Substreamed per problem id, so decisions are independent of scheduling
/// order.
bool skeptic_inclusion_decision(std::uint64_t seed, const std::string& problem_id,
                                bool passed, double p_pass, double p_fail);

/// One generation per problem; problems whose generation passes every case
/// are excluded, the rest yield a failure-feedback sample categorized by the
/// first failing status. Problems hitting backend/judge environment errors
/// are skipped (and reported via `skipped`, when given).
std::vector<RefinementSample> build_error_set(const ProblemSet& problems,
                                              GenerationBackend& backend,
                                              const SandboxJudge& judge,
                                              const SynthesisOptions& options,
                                              std::vector<std::string>* skipped = nullptr);

/// One generation per problem; skepticism feedback is rendered from the
/// solution alone, then the verdict decides the inclusion probability
/// (p_pass on a full pass, p_fail otherwise) and the category.
std::vector<RefinementSample> build_skeptic_set(const ProblemSet& problems,
                                                GenerationBackend& backend,
                                                const SandboxJudge& judge,
                                                const SynthesisOptions& options,
                                                std::vector<std::string>* skipped = nullptr);

/// Base problems become feedback-free samples; output order is initial,
/// then error-driven, then skepticism-driven.
RLDataset assemble_rl_dataset(const ProblemSet& base,
                              const std::vector<RefinementSample>& err,
                              const std::vector<RefinementSample>& skep);

/// Aligned per-category count table (initial, error-driven rows, skepticism
/// rows, total).
std::string dataset_stats(const RLDataset& dataset);

std::string refinement_sample_to_json_line(const RefinementSample& sample);
RefinementSample refinement_sample_from_json_line(const std::string& line,
                                                  long line_number = 0);
void save_rl_dataset(const RLDataset& dataset, const std::string& path);
RLDataset load_rl_dataset(const std::string& path);

}  // namespace skeptic
