#include "misinfo/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace misinfo {

SocialGraph::SocialGraph(int n, std::span<const std::pair<AgentId, AgentId>> edges)
    : followees_(static_cast<std::size_t>(n)), followers_(static_cast<std::size_t>(n)) {
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("SocialGraph: agent id out of range");
    if (u == v) throw std::invalid_argument("SocialGraph: self-loop on " + std::to_string(u));
    followees_[static_cast<std::size_t>(u)].push_back(v);
    followers_[static_cast<std::size_t>(v)].push_back(u);
  }
  for (auto& list : followees_) {
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      throw std::invalid_argument("SocialGraph: duplicate edge");
    }
  }
  for (auto& list : followers_) std::sort(list.begin(), list.end());
  edge_count_ = edges.size();
}

bool SocialGraph::follows(AgentId u, AgentId v) const {
  const auto list = followees(u);
  return std::binary_search(list.begin(), list.end(), v);
}

std::vector<std::pair<AgentId, AgentId>> SocialGraph::edges() const {
  std::vector<std::pair<AgentId, AgentId>> out;
  out.reserve(edge_count_);
  for (AgentId u = 0; u < size(); ++u) {
    for (AgentId v : followees(u)) out.emplace_back(u, v);
  }
  return out;
}

namespace {

std::vector<int> sample_regular_peaks(int steps_per_day, RandomSource& rng) {
  const int count = std::min(1 + static_cast<int>(rng.below(3)), steps_per_day);
  std::vector<int> offsets(static_cast<std::size_t>(steps_per_day));
  std::iota(offsets.begin(), offsets.end(), 0);
  // Partial Fisher-Yates: the first `count` slots are a uniform sample.
  for (int i = 0; i < count; ++i) {
    const auto j = static_cast<std::size_t>(i) + rng.below(static_cast<std::uint64_t>(steps_per_day - i));
    std::swap(offsets[static_cast<std::size_t>(i)], offsets[j]);
  }
  offsets.resize(static_cast<std::size_t>(count));
  std::sort(offsets.begin(), offsets.end());
  return offsets;
}

}  // namespace

std::vector<AgentProfile> generate_agents(const SimulationConfig& config, RandomSource& rng) {
  const int n = config.n_users;
  int n_bot = static_cast<int>(std::lround(n * config.bot_pct));
  int n_inf = static_cast<int>(std::lround(n * config.influencer_pct));
  n_bot = std::min(n_bot, n);
  n_inf = std::min(n_inf, n - n_bot);

  std::vector<AgentKind> kinds(static_cast<std::size_t>(n), AgentKind::Regular);
  std::fill_n(kinds.begin(), n_bot, AgentKind::Bot);
  std::fill_n(kinds.begin() + n_bot, n_inf, AgentKind::Influencer);
  for (std::size_t i = kinds.size(); i > 1; --i) {
    std::swap(kinds[i - 1], kinds[rng.below(i)]);
  }

  std::vector<AgentProfile> agents(static_cast<std::size_t>(n));
  for (AgentId id = 0; id < n; ++id) {
    RandomSource own = rng.split(static_cast<std::uint64_t>(id));
    AgentProfile& a = agents[static_cast<std::size_t>(id)];
    a.id = id;
    a.kind = kinds[static_cast<std::size_t>(id)];
    const KindParams& p = config.params(a.kind);
    a.activity_prob = own.uniform(p.activity_lo, p.activity_hi);
    a.naivety = own.uniform(p.naivety_lo, p.naivety_hi);
    a.credibility = credibility_from_naivety(a.naivety);
    a.post_prob = p.post_prob;
    a.post_misinfo_prob = p.post_misinfo_prob;
    a.preference = sample_unit_vector(config.topic_dim, own);
    if (a.kind == AgentKind::Regular) a.peak_steps = sample_regular_peaks(config.steps_per_day, own);
  }

  // Influencers post at the offsets where the most regular users are at a peak.
  std::vector<int> traffic(static_cast<std::size_t>(config.steps_per_day), 0);
  for (const auto& a : agents) {
    for (int s : a.peak_steps) ++traffic[static_cast<std::size_t>(s)];
  }
  std::vector<int> order(traffic.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return traffic[static_cast<std::size_t>(x)] > traffic[static_cast<std::size_t>(y)];
  });
  order.resize(static_cast<std::size_t>(std::min<int>(config.influencer_peak_count, config.steps_per_day)));
  std::sort(order.begin(), order.end());
  for (auto& a : agents) {
    if (a.kind == AgentKind::Influencer) a.peak_steps = order;
  }
  return agents;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("cosine_similarity: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0.0) || !(nb > 0.0)) throw std::invalid_argument("cosine_similarity: zero vector");
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

SocialGraph generate_graph(std::span<const AgentProfile> agents, const SimulationConfig& config,
                           RandomSource& rng) {
  const int n = static_cast<int>(agents.size());
  if (n < 2) throw std::invalid_argument("generate_graph: need at least 2 agents");

  std::vector<std::pair<AgentId, AgentId>> edges;
  edges.reserve(static_cast<std::size_t>(n * config.avg_followers * 1.2));
  std::vector<std::pair<double, AgentId>> keys;
  keys.reserve(static_cast<std::size_t>(n));

  for (AgentId u = 0; u < n; ++u) {
    RandomSource own = rng.split(static_cast<std::uint64_t>(u));
    const int degree = std::clamp(own.poisson(config.avg_followers), 1, n - 1);

    // Efraimidis-Spirakis: the `degree` largest log(U)/w keys form a weighted
    // sample without replacement.
    keys.clear();
    const auto& pu = agents[static_cast<std::size_t>(u)].preference;
    for (AgentId v = 0; v < n; ++v) {
      if (v == u) continue;
      const auto& av = agents[static_cast<std::size_t>(v)];
      const double w = std::max(cosine_similarity(pu, av.preference), 0.01) * config.params(av.kind).follow_boost;
      keys.emplace_back(std::log(own.uniform_pos()) / w, v);
    }
    std::partial_sort(keys.begin(), keys.begin() + degree, keys.end(), [](const auto& x, const auto& y) {
      return x.first != y.first ? x.first > y.first : x.second < y.second;
    });
    for (int i = 0; i < degree; ++i) edges.emplace_back(u, keys[static_cast<std::size_t>(i)].second);
  }
  return SocialGraph(n, edges);
}

void write_edge_list(std::ostream& out, const SocialGraph& graph) {
  for (AgentId u = 0; u < graph.size(); ++u) {
    for (AgentId v : graph.followees(u)) out << u << ' ' << v << '\n';
  }
}

}  // namespace misinfo
