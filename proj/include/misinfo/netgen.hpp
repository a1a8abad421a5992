#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "misinfo/domain.hpp"

namespace misinfo {

/// Directed follow graph. An edge u -> v means u follows v, so v's shares
/// reach u. Adjacency lists are sorted.
class SocialGraph {
 public:
  SocialGraph() = default;
  /// Builds from follower -> followee pairs; rejects self-loops, duplicates
  /// and out-of-range ids.
  SocialGraph(int n, std::span<const std::pair<AgentId, AgentId>> edges);

  int size() const { return static_cast<int>(followees_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const AgentId> followees(AgentId u) const { return followees_[static_cast<std::size_t>(u)]; }
  std::span<const AgentId> followers(AgentId v) const { return followers_[static_cast<std::size_t>(v)]; }
  bool follows(AgentId u, AgentId v) const;

  std::vector<std::pair<AgentId, AgentId>> edges() const;

 private:
  std::vector<std::vector<AgentId>> followees_;
  std::vector<std::vector<AgentId>> followers_;
  std::size_t edge_count_ = 0;
};

/// Population with kind counts round(n * pct); Regular absorbs the remainder.
/// Kinds are assigned to ids by a seeded shuffle.
std::vector<AgentProfile> generate_agents(const SimulationConfig& config, RandomSource& rng);

/// a.b / (|a| |b|). Throws on mismatched dimensions or a zero vector.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Preference-similarity follow graph. Each agent draws an out-degree from
/// Poisson(avg_followers) clamped to [1, n-1], then picks that many distinct
/// followees by weighted sampling without replacement with weight
/// max(cos, 0.01) * follow_boost(kind of followee).
SocialGraph generate_graph(std::span<const AgentProfile> agents, const SimulationConfig& config,
                           RandomSource& rng);

/// One "follower_id followee_id" pair per line.
void write_edge_list(std::ostream& out, const SocialGraph& graph);

}  // namespace misinfo
