#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "misinfo/domain.hpp"
#include "misinfo/metrics.hpp"

namespace misinfo {

struct BatchPlan {
  SimulationConfig base;
  std::vector<Algorithm> algorithms{kAllAlgorithms.begin(), kAllAlgorithms.end()};
  int iterations = 5;
  std::filesystem::path out_dir = "results";
  /// Runs in flight; 0 means one per hardware thread.
  int jobs = 0;
  /// Writes the follow graph of the first run here when set.
  std::optional<std::filesystem::path> export_graph;
};

/// Stable per-run seed. Keyed on the algorithm's fixed enum value rather than
/// its position in the plan, so adding algorithms never perturbs other runs.
std::uint64_t derive_run_seed(std::uint64_t base_seed, Algorithm algorithm, int iteration);

struct RunRecord {
  Algorithm algorithm = Algorithm::Random;
  int iteration = 0;  // 1-based
  std::uint64_t seed = 0;
  std::vector<StepMetricsRow> rows;
  RunSummary summary;
};

struct BatchResult {
  /// Ordered by plan algorithm order, then iteration.
  std::vector<RunRecord> runs;
  /// One entry per algorithm: means over its iterations.
  std::vector<RunSummary> per_algorithm;
  std::vector<MetricRanks> ranks;
};

/// Thrown before any simulation starts.
class BatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs every (algorithm, iteration) pair, up to plan.jobs at a time, in memory.
/// Results do not depend on the job count.
BatchResult execute_plan(const BatchPlan& plan);

/// execute_plan plus persistence: run_<algorithm>_<iteration>.csv per run and
/// summary.csv. Throws BatchError on invalid config or an unwritable output
/// directory before simulating anything.
BatchResult run_batch(const BatchPlan& plan);

inline constexpr std::string_view kRunCsvHeader =
    "run_id,algorithm,iteration,step,n_susceptible,n_exposed,n_infected,msp,mrd,mc,n_contents,n_fake_contents,"
    "n_interactions_step";
inline constexpr std::string_view kSummaryCsvHeader = "algorithm,iteration,mean_msp,mean_mrd,mean_mc";

/// Fixed-point with 6 decimals, '.' separator, independent of locale.
std::string format_real(double value);

std::string run_id(Algorithm algorithm, int iteration);
void write_run_csv(std::ostream& out, const RunRecord& run);
/// Per-run rows, then "<algorithm>,ALL,..." means, then "<algorithm>,RANK,<msp>,<mrd>,<mc>".
void write_summary_csv(std::ostream& out, const BatchResult& result);

/// Applies one key=value setting (config-file syntax) to the plan. Throws
/// std::invalid_argument on an unknown key or unparsable value.
void apply_setting(BatchPlan& plan, std::string_view key, std::string_view value);

/// Reads key=value lines; '#' starts a comment. Errors carry the line number.
void apply_config_file(BatchPlan& plan, std::istream& in);

}  // namespace misinfo
