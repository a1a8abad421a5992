#include "misinfo/metrics.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace misinfo {

double msp(int n_infected, int n_total) {
  if (n_total <= 0) throw std::invalid_argument("msp: empty population");
  return 100.0 * static_cast<double>(n_infected) / static_cast<double>(n_total);
}

double msp(std::span<const AgentProfile> agents) {
  const auto infected = std::count_if(agents.begin(), agents.end(),
                                      [](const AgentProfile& a) { return a.state == EpidemicState::Infected; });
  return msp(static_cast<int>(infected), static_cast<int>(agents.size()));
}

double mrd(std::span<const ContentId> recommended, const ContentCatalog& catalog) {
  if (catalog.empty()) throw std::invalid_argument("mrd: empty catalog");
  if (recommended.empty()) return 0.0;
  const auto fake = std::count_if(recommended.begin(), recommended.end(),
                                  [&](ContentId id) { return catalog.item(id).is_fake; });
  return static_cast<double>(fake) / static_cast<double>(recommended.size()) - catalog.fake_fraction();
}

double mc(std::span<const std::vector<ContentId>> per_agent, const ContentCatalog& catalog) {
  std::size_t lists = 0;
  std::size_t fake = 0;
  for (const auto& list : per_agent) {
    if (list.empty()) continue;
    ++lists;
    for (ContentId id : list) fake += catalog.item(id).is_fake ? 1 : 0;
  }
  return lists == 0 ? 0.0 : static_cast<double>(fake) / static_cast<double>(lists);
}

RunSummary summarize(std::span<const StepMetricsRow> rows, Algorithm algorithm, int iteration) {
  RunSummary s{algorithm, iteration, 0.0, 0.0, 0.0};
  if (rows.empty()) return s;
  for (const auto& r : rows) {
    s.mean_msp += r.msp;
    s.mean_mrd += r.mrd;
    s.mean_mc += r.mc;
  }
  const auto n = static_cast<double>(rows.size());
  s.mean_msp /= n;
  s.mean_mrd /= n;
  s.mean_mc /= n;
  return s;
}

RunSummary average(std::span<const RunSummary> runs) {
  if (runs.empty()) throw std::invalid_argument("average: no runs");
  RunSummary s{runs.front().algorithm, 0, 0.0, 0.0, 0.0};
  for (const auto& r : runs) {
    s.mean_msp += r.mean_msp;
    s.mean_mrd += r.mean_mrd;
    s.mean_mc += r.mean_mc;
  }
  const auto n = static_cast<double>(runs.size());
  s.mean_msp /= n;
  s.mean_mrd /= n;
  s.mean_mc /= n;
  return s;
}

namespace {

template <typename Get>
void assign_ranks(std::span<const RunSummary> s, std::vector<MetricRanks>& out, Get get, int MetricRanks::*field) {
  std::vector<std::size_t> order(s.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return get(s[a]) < get(s[b]); });
  for (std::size_t r = 0; r < order.size(); ++r) out[order[r]].*field = static_cast<int>(r) + 1;
}

}  // namespace

std::vector<MetricRanks> rank_algorithms(std::span<const RunSummary> per_algorithm) {
  std::vector<MetricRanks> out(per_algorithm.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i].algorithm = per_algorithm[i].algorithm;
  assign_ranks(per_algorithm, out, [](const RunSummary& r) { return r.mean_msp; }, &MetricRanks::msp);
  assign_ranks(per_algorithm, out, [](const RunSummary& r) { return r.mean_mrd; }, &MetricRanks::mrd);
  assign_ranks(per_algorithm, out, [](const RunSummary& r) { return r.mean_mc; }, &MetricRanks::mc);
  return out;
}

}  // namespace misinfo
