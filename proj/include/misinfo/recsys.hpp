#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "misinfo/content.hpp"
#include "misinfo/domain.hpp"

namespace misinfo {

/// Sparse binary user x item matrix of Engage events. Rows and columns are
/// kept sorted; entries are never removed.
class InteractionMatrix {
 public:
  explicit InteractionMatrix(int n_users = 0) : rows_(static_cast<std::size_t>(n_users)) {}

  /// Sets entry (u, i). Returns false if it was already set.
  bool add(AgentId u, ContentId i);
  bool has(AgentId u, ContentId i) const;

  std::span<const ContentId> row(AgentId u) const { return rows_.at(static_cast<std::size_t>(u)); }
  std::span<const AgentId> column(ContentId i) const;
  std::size_t count(AgentId u) const { return row(u).size(); }

  int n_users() const { return static_cast<int>(rows_.size()); }
  /// One past the largest item id with a nonempty column.
  int n_items() const { return static_cast<int>(cols_.size()); }
  std::size_t nnz() const { return entries_.size(); }
  /// Every set entry in the order it was added.
  std::span<const std::pair<AgentId, ContentId>> entries() const { return entries_; }

 private:
  std::vector<std::vector<ContentId>> rows_;
  std::vector<std::vector<AgentId>> cols_;
  std::vector<std::pair<AgentId, ContentId>> entries_;
};

/// Not engaged with by `u` and not authored by `u`.
bool is_eligible(AgentId u, const ContentItem& item, const InteractionMatrix& matrix);

/// Ids with a score, ordered by score descending then id ascending.
using ScoredItems = std::vector<std::pair<ContentId, double>>;
std::vector<ContentId> top_n(ScoredItems scored, std::size_t n);

std::vector<ContentId> recommend_random(AgentId u, const ContentCatalog& catalog, const InteractionMatrix& matrix,
                                        std::size_t n, RandomSource& rng);

/// engagement(i, step) + number of engage events in [step - window, step].
double popularity_score(const ContentCatalog& catalog, ContentId i, Step step, int window);
/// Every item ranked by popularity_score, ties by lower id.
std::vector<ContentId> popularity_ranking(const ContentCatalog& catalog, Step step, int window);
std::vector<ContentId> recommend_popular(AgentId u, const ContentCatalog& catalog, const InteractionMatrix& matrix,
                                         std::size_t n, Step step, int window);
/// Same result as recommend_popular, reading a precomputed ranking.
std::vector<ContentId> recommend_popular(AgentId u, std::span<const ContentId> ranking,
                                         const ContentCatalog& catalog, const InteractionMatrix& matrix,
                                         std::size_t n);

/// Cosine between the binary rows of two users.
double user_similarity(const InteractionMatrix& matrix, AgentId u, AgentId v);
/// Cosine between the binary columns of two items.
double item_similarity(const InteractionMatrix& matrix, ContentId i, ContentId j);

/// User-based CF. Neighbours are the k most similar users with nonempty rows;
/// items scored by summed neighbour similarity; zero scores are never emitted.
std::vector<ContentId> recommend_user_knn(AgentId u, const InteractionMatrix& matrix, const ContentCatalog& catalog,
                                          int k, std::size_t n);
/// Every eligible item with a positive user-kNN score, unordered.
ScoredItems score_user_knn(AgentId u, const InteractionMatrix& matrix, const ContentCatalog& catalog, int k);

/// Item co-occurrence counts kept in step with a growing matrix, and each
/// item's k nearest items by column cosine for the latest snapshot.
class ItemNeighborIndex {
 public:
  explicit ItemNeighborIndex(int k) : k_(k) {}

  /// Absorbs entries added since the previous call (or everything, if the
  /// matrix is not the one seen before) and recomputes neighbourhoods.
  void sync(const InteractionMatrix& matrix);

  /// (item, similarity), similarity descending then id ascending; only
  /// positive similarities.
  std::span<const std::pair<ContentId, double>> neighbors(ContentId i) const;
  /// (c, sim(c, j)) for every item c that has j among its nearest items.
  std::span<const std::pair<ContentId, double>> reverse(ContentId j) const;

 private:
  int k_;
  const InteractionMatrix* source_ = nullptr;
  std::size_t absorbed_ = 0;
  // Exact top entries of an item's similarity list, beyond k as slack. Every
  // co-occurring item outside `top` ranks no higher than `bound`.
  struct Candidates {
    std::vector<std::pair<ContentId, double>> top;
    std::optional<std::pair<ContentId, double>> bound;
  };
  void rebuild(const InteractionMatrix& matrix, ContentId i);
  void update(ContentId i, std::pair<ContentId, double> entry);

  std::vector<std::vector<ContentId>> rows_;
  std::vector<std::unordered_map<ContentId, int>> co_;
  std::vector<Candidates> candidates_;
  std::vector<std::vector<std::pair<ContentId, double>>> reverse_;
};

/// Item-based CF. score(c) = sum of sim(c, j) over the agent's engaged items j
/// that are among c's k nearest items. Zero scores are never emitted.
std::vector<ContentId> recommend_item_knn(AgentId u, const InteractionMatrix& matrix, const ContentCatalog& catalog,
                                          int k, std::size_t n);
/// Same result, reading an index already synced to `matrix`.
std::vector<ContentId> recommend_item_knn(AgentId u, const InteractionMatrix& matrix, const ContentCatalog& catalog,
                                          const ItemNeighborIndex& index, std::size_t n);
/// Every eligible item with a positive item-kNN score, unordered.
ScoredItems score_item_knn(AgentId u, const InteractionMatrix& matrix, const ContentCatalog& catalog,
                           const ItemNeighborIndex& index);

/// score(i) = cos(preference, topic(i)) over every eligible item.
std::vector<ContentId> recommend_content_based(const AgentProfile& agent, const ContentCatalog& catalog,
                                               const InteractionMatrix& matrix, std::size_t n);

struct RecommendContext {
  const SimulationConfig& config;
  std::span<const AgentProfile> agents;
  const ContentCatalog& catalog;
  const InteractionMatrix& matrix;
};

/// Uniform top-N interface. prepare() is called once per step on the frozen
/// snapshot before any recommend() call for that step.
class Recommender {
 public:
  virtual ~Recommender() = default;
  virtual Algorithm algorithm() const = 0;
  std::string_view name() const { return to_string(algorithm()); }
  virtual void prepare(const RecommendContext& /*ctx*/, Step /*step*/) {}
  virtual std::vector<ContentId> recommend(const RecommendContext& ctx, AgentId u, Step step, std::size_t n,
                                           RandomSource& rng) = 0;
};

std::unique_ptr<Recommender> make_recommender(Algorithm algorithm);

/// Collaborative filters serve users below the interaction threshold with
/// random recommendations.
bool uses_cold_start_fallback(Algorithm algorithm);

}  // namespace misinfo
