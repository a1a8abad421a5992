#pragma once

#include <span>
#include <vector>

#include "misinfo/content.hpp"
#include "misinfo/domain.hpp"

namespace misinfo {

struct StepMetricsRow {
  Step step = 0;
  int n_susceptible = 0;
  int n_exposed = 0;
  int n_infected = 0;
  double msp = 0.0;  // percent
  double mrd = 0.0;
  double mc = 0.0;
  int n_contents = 0;
  int n_fake_contents = 0;
  int n_interactions_step = 0;

  bool operator==(const StepMetricsRow&) const = default;
};

struct RunSummary {
  Algorithm algorithm = Algorithm::Random;
  int iteration = 0;
  double mean_msp = 0.0;
  double mean_mrd = 0.0;
  double mean_mc = 0.0;
};

/// Percentage of agents in state Infected. Throws on an empty population.
double msp(std::span<const AgentProfile> agents);
double msp(int n_infected, int n_total);

/// Fake fraction of the recommended multiset minus the catalog's fake
/// fraction; 0 when nothing was recommended. Throws on an empty catalog.
double mrd(std::span<const ContentId> recommended, const ContentCatalog& catalog);

/// Mean number of fake items per nonempty recommendation list; 0 when no
/// agent received recommendations.
double mc(std::span<const std::vector<ContentId>> per_agent, const ContentCatalog& catalog);

RunSummary summarize(std::span<const StepMetricsRow> rows, Algorithm algorithm, int iteration);

struct MetricRanks {
  Algorithm algorithm = Algorithm::Random;
  int msp = 0;
  int mrd = 0;
  int mc = 0;
};

/// Ranks 1 (lowest mean, least propagating) to N per metric. Ties go to the
/// earlier entry.
std::vector<MetricRanks> rank_algorithms(std::span<const RunSummary> per_algorithm);

/// Arithmetic mean of several runs of one algorithm; iteration is set to 0.
RunSummary average(std::span<const RunSummary> runs);

}  // namespace misinfo
