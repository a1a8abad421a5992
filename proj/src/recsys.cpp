#include "misinfo/recsys.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <unordered_set>

#include "misinfo/netgen.hpp"

namespace misinfo {

namespace {

template <typename T>
bool sorted_insert(std::vector<T>& v, T x) {
  const auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) return false;
  v.insert(it, x);
  return true;
}

bool better(const std::pair<ContentId, double>& a, const std::pair<ContentId, double>& b) {
  return a.second != b.second ? a.second > b.second : a.first < b.first;
}

}  // namespace

bool InteractionMatrix::add(AgentId u, ContentId i) {
  if (u < 0 || u >= n_users()) throw std::out_of_range("InteractionMatrix::add: user id out of range");
  if (i < 0) throw std::out_of_range("InteractionMatrix::add: negative item id");
  if (!sorted_insert(rows_[static_cast<std::size_t>(u)], i)) return false;
  if (static_cast<std::size_t>(i) >= cols_.size()) cols_.resize(static_cast<std::size_t>(i) + 1);
  sorted_insert(cols_[static_cast<std::size_t>(i)], u);
  entries_.emplace_back(u, i);
  return true;
}

bool InteractionMatrix::has(AgentId u, ContentId i) const {
  const auto r = row(u);
  return std::binary_search(r.begin(), r.end(), i);
}

std::span<const AgentId> InteractionMatrix::column(ContentId i) const {
  if (i < 0 || static_cast<std::size_t>(i) >= cols_.size()) return {};
  return cols_[static_cast<std::size_t>(i)];
}

bool is_eligible(AgentId u, const ContentItem& item, const InteractionMatrix& matrix) {
  if (item.author && *item.author == u) return false;
  return !matrix.has(u, item.id);
}

std::vector<ContentId> top_n(ScoredItems scored, std::size_t n) {
  const std::size_t m = std::min(n, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(m), scored.end(), better);
  std::vector<ContentId> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = scored[i].first;
  return out;
}

// ---------------------------------------------------------------- random

std::vector<ContentId> recommend_random(AgentId u, const ContentCatalog& catalog, const InteractionMatrix& matrix,
                                        std::size_t n, RandomSource& rng) {
  std::vector<ContentId> out;
  if (n == 0 || catalog.empty()) return out;
  const auto size = static_cast<std::uint64_t>(catalog.size());

  // Rejection sampling is exact for a uniform sample without replacement; it
  // only needs a fallback when most of the catalog is ineligible.
  std::unordered_set<ContentId> chosen;
  const std::uint64_t max_attempts = 16 * n + 64;
  for (std::uint64_t attempt = 0; attempt < max_attempts && out.size() < n; ++attempt) {
    const auto id = static_cast<ContentId>(rng.below(size));
    if (chosen.contains(id) || !is_eligible(u, catalog.item(id), matrix)) continue;
    chosen.insert(id);
    out.push_back(id);
  }
  if (out.size() == n) return out;

  std::vector<ContentId> pool;
  for (const auto& item : catalog.items()) {
    if (!chosen.contains(item.id) && is_eligible(u, item, matrix)) pool.push_back(item.id);
  }
  for (std::size_t i = 0; i < pool.size() && out.size() < n; ++i) {
    const auto j = i + rng.below(pool.size() - i);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

// ------------------------------------------------------------ popularity

double popularity_score(const ContentCatalog& catalog, ContentId i, Step step, int window) {
  return catalog.engagement(i, step) + catalog.engage_count(i, step - window, step);
}

std::vector<ContentId> popularity_ranking(const ContentCatalog& catalog, Step step, int window) {
  ScoredItems scored;
  scored.reserve(catalog.size());
  for (const auto& item : catalog.items()) {
    if (item.creation_step <= step) scored.emplace_back(item.id, popularity_score(catalog, item.id, step, window));
  }
  std::sort(scored.begin(), scored.end(), better);
  std::vector<ContentId> out(scored.size());
  for (std::size_t i = 0; i < scored.size(); ++i) out[i] = scored[i].first;
  return out;
}

std::vector<ContentId> recommend_popular(AgentId u, std::span<const ContentId> ranking,
                                         const ContentCatalog& catalog, const InteractionMatrix& matrix,
                                         std::size_t n) {
  std::vector<ContentId> out;
  for (ContentId id : ranking) {
    if (out.size() >= n) break;
    if (is_eligible(u, catalog.item(id), matrix)) out.push_back(id);
  }
  return out;
}

std::vector<ContentId> recommend_popular(AgentId u, const ContentCatalog& catalog, const InteractionMatrix& matrix,
                                         std::size_t n, Step step, int window) {
  if (step < 0) throw std::invalid_argument("recommend_popular: negative step");
  return recommend_popular(u, popularity_ranking(catalog, step, window), catalog, matrix, n);
}

// ------------------------------------------------------------ similarity

namespace {

std::size_t sorted_overlap(std::span<const int> a, std::span<const int> b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) ++i;
    else if (*j < *i) ++j;
    else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double binary_cosine(std::size_t overlap, std::size_t na, std::size_t nb) {
  if (overlap == 0 || na == 0 || nb == 0) return 0.0;
  return static_cast<double>(overlap) / std::sqrt(static_cast<double>(na) * static_cast<double>(nb));
}

}  // namespace

double user_similarity(const InteractionMatrix& matrix, AgentId u, AgentId v) {
  const auto a = matrix.row(u);
  const auto b = matrix.row(v);
  return binary_cosine(sorted_overlap(a, b), a.size(), b.size());
}

double item_similarity(const InteractionMatrix& matrix, ContentId i, ContentId j) {
  const auto a = matrix.column(i);
  const auto b = matrix.column(j);
  return binary_cosine(sorted_overlap(a, b), a.size(), b.size());
}

// -------------------------------------------------------------- user knn

ScoredItems score_user_knn(AgentId u, const InteractionMatrix& matrix, const ContentCatalog& catalog, int k) {
  const auto own = matrix.row(u);
  if (own.empty() || k <= 0) return {};

  std::vector<int> overlap(static_cast<std::size_t>(matrix.n_users()), 0);
  for (ContentId i : own) {
    for (AgentId v : matrix.column(i)) ++overlap[static_cast<std::size_t>(v)];
  }
  ScoredItems neighbors;
  for (AgentId v = 0; v < matrix.n_users(); ++v) {
    const int ov = overlap[static_cast<std::size_t>(v)];
    if (v == u || ov == 0) continue;
    neighbors.emplace_back(v, binary_cosine(static_cast<std::size_t>(ov), own.size(), matrix.count(v)));
  }
  const std::size_t kk = std::min(static_cast<std::size_t>(k), neighbors.size());
  std::partial_sort(neighbors.begin(), neighbors.begin() + static_cast<std::ptrdiff_t>(kk), neighbors.end(), better);
  neighbors.resize(kk);
  // Accumulate in ascending neighbour id so sums are reproducible term by term.
  std::sort(neighbors.begin(), neighbors.end());

  // The agent's own items are marked with a negative score and skipped.
  std::vector<double> scores(static_cast<std::size_t>(matrix.n_items()), 0.0);
  for (ContentId i : own) scores[static_cast<std::size_t>(i)] = -1.0;
  std::vector<ContentId> touched;
  for (const auto& [v, sim] : neighbors) {
    for (ContentId i : matrix.row(v)) {
      auto& s = scores[static_cast<std::size_t>(i)];
      if (s < 0.0) continue;
      if (s == 0.0) touched.push_back(i);
      s += sim;
    }
  }
  ScoredItems scored;
  scored.reserve(touched.size());
  for (ContentId i : touched) {
    if (!catalog.contains(i) || catalog.item(i).author == u) continue;
    scored.emplace_back(i, scores[static_cast<std::size_t>(i)]);
  }
  return scored;
}

std::vector<ContentId> recommend_user_knn(AgentId u, const InteractionMatrix& matrix, const ContentCatalog& catalog,
                                          int k, std::size_t n) {
  if (n == 0) return {};
  return top_n(score_user_knn(u, matrix, catalog, k), n);
}

// -------------------------------------------------------------- item knn

namespace {

constexpr std::size_t kNeighborSlack = 2;

}  // namespace

void ItemNeighborIndex::rebuild(const InteractionMatrix& matrix, ContentId i) {
  auto& cand = candidates_[static_cast<std::size_t>(i)];
  const auto& co = co_[static_cast<std::size_t>(i)];
  const std::size_t ni = matrix.column(i).size();
  ScoredItems sims;
  sims.reserve(co.size());
  for (const auto& [j, ov] : co) {
    sims.emplace_back(j, binary_cosine(static_cast<std::size_t>(ov), ni, matrix.column(j).size()));
  }
  const std::size_t keep = kNeighborSlack * static_cast<std::size_t>(k_);
  const std::size_t m = std::min(keep + 1, sims.size());
  std::partial_sort(sims.begin(), sims.begin() + static_cast<std::ptrdiff_t>(m), sims.end(), better);
  cand.bound.reset();
  if (sims.size() > keep) cand.bound = sims[keep];
  sims.resize(std::min(keep, sims.size()));
  cand.top = std::move(sims);
}

void ItemNeighborIndex::update(ContentId i, std::pair<ContentId, double> entry) {
  auto& cand = candidates_[static_cast<std::size_t>(i)];
  auto& top = cand.top;
  const auto it = std::find_if(top.begin(), top.end(), [&](const auto& e) { return e.first == entry.first; });
  if (it != top.end()) top.erase(it);
  if (cand.bound && !better(entry, *cand.bound)) return;
  top.insert(std::upper_bound(top.begin(), top.end(), entry, better), entry);
  if (top.size() > kNeighborSlack * static_cast<std::size_t>(k_)) {
    cand.bound = top.back();
    top.pop_back();
  }
}

void ItemNeighborIndex::sync(const InteractionMatrix& matrix) {
  const auto entries = matrix.entries();
  if (source_ != &matrix || absorbed_ > entries.size()) {
    source_ = &matrix;
    absorbed_ = 0;
    rows_.clear();
    co_.clear();
    candidates_.clear();
  }
  const auto n_items = static_cast<std::size_t>(matrix.n_items());
  rows_.resize(static_cast<std::size_t>(matrix.n_users()));
  co_.resize(n_items);
  candidates_.resize(n_items);

  // Items whose column grew. Their own lists are rebuilt; everyone else only
  // sees similarity changes against these items.
  std::vector<ContentId> changed;
  std::vector<std::uint8_t> is_changed(n_items, 0);
  for (; absorbed_ < entries.size(); ++absorbed_) {
    const auto [v, i] = entries[absorbed_];
    auto& row = rows_[static_cast<std::size_t>(v)];
    for (ContentId j : row) {
      ++co_[static_cast<std::size_t>(i)][j];
      ++co_[static_cast<std::size_t>(j)][i];
    }
    row.push_back(i);
    if (!is_changed[static_cast<std::size_t>(i)]) {
      is_changed[static_cast<std::size_t>(i)] = 1;
      changed.push_back(i);
    }
  }
  if (k_ <= 0) {
    reverse_.assign(n_items, {});
    return;
  }

  std::sort(changed.begin(), changed.end());
  std::vector<ContentId> stale;
  for (ContentId j : changed) {
    rebuild(matrix, j);
    const std::size_t nj = matrix.column(j).size();
    for (const auto& [i, ov] : co_[static_cast<std::size_t>(j)]) {
      if (is_changed[static_cast<std::size_t>(i)]) continue;
      update(i, {j, binary_cosine(static_cast<std::size_t>(ov), matrix.column(i).size(), nj)});
      stale.push_back(i);
    }
  }
  // An item whose confirmed prefix fell below k while others remain outside
  // needs a full pass.
  std::sort(stale.begin(), stale.end());
  stale.erase(std::unique(stale.begin(), stale.end()), stale.end());
  for (ContentId i : stale) {
    const auto& cand = candidates_[static_cast<std::size_t>(i)];
    if (cand.bound && cand.top.size() < static_cast<std::size_t>(k_)) rebuild(matrix, i);
  }

  reverse_.assign(n_items, {});
  for (std::size_t c = 0; c < n_items; ++c) {
    for (const auto& e : neighbors(static_cast<ContentId>(c))) {
      reverse_[static_cast<std::size_t>(e.first)].emplace_back(static_cast<ContentId>(c), e.second);
    }
  }
}

std::span<const std::pair<ContentId, double>> ItemNeighborIndex::neighbors(ContentId i) const {
  if (i < 0 || static_cast<std::size_t>(i) >= candidates_.size()) return {};
  const auto& top = candidates_[static_cast<std::size_t>(i)].top;
  return std::span(top).first(std::min(top.size(), static_cast<std::size_t>(std::max(k_, 0))));
}

std::span<const std::pair<ContentId, double>> ItemNeighborIndex::reverse(ContentId j) const {
  if (j < 0 || static_cast<std::size_t>(j) >= reverse_.size()) return {};
  return reverse_[static_cast<std::size_t>(j)];
}

ScoredItems score_item_knn(AgentId u, const InteractionMatrix& matrix, const ContentCatalog& catalog,
                           const ItemNeighborIndex& index) {
  const auto own = matrix.row(u);
  if (own.empty()) return {};
  // Ascending j, so every candidate's sum is accumulated in neighbour id order.
  std::vector<double> scores(static_cast<std::size_t>(matrix.n_items()), 0.0);
  for (ContentId j : own) scores[static_cast<std::size_t>(j)] = -1.0;
  std::vector<ContentId> touched;
  for (ContentId j : own) {
    for (const auto& [c, sim] : index.reverse(j)) {
      auto& s = scores[static_cast<std::size_t>(c)];
      if (s < 0.0) continue;
      if (s == 0.0) touched.push_back(c);
      s += sim;
    }
  }
  ScoredItems scored;
  scored.reserve(touched.size());
  for (ContentId c : touched) {
    const double s = scores[static_cast<std::size_t>(c)];
    if (s > 0.0 && catalog.contains(c) && catalog.item(c).author != u) scored.emplace_back(c, s);
  }
  return scored;
}

std::vector<ContentId> recommend_item_knn(AgentId u, const InteractionMatrix& matrix, const ContentCatalog& catalog,
                                          const ItemNeighborIndex& index, std::size_t n) {
  if (n == 0) return {};
  return top_n(score_item_knn(u, matrix, catalog, index), n);
}

std::vector<ContentId> recommend_item_knn(AgentId u, const InteractionMatrix& matrix, const ContentCatalog& catalog,
                                          int k, std::size_t n) {
  ItemNeighborIndex index(k);
  index.sync(matrix);
  return recommend_item_knn(u, matrix, catalog, index, n);
}

// --------------------------------------------------------- content based

std::vector<ContentId> recommend_content_based(const AgentProfile& agent, const ContentCatalog& catalog,
                                               const InteractionMatrix& matrix, std::size_t n) {
  ScoredItems scored;
  scored.reserve(catalog.size());
  for (const auto& item : catalog.items()) {
    if (is_eligible(agent.id, item, matrix)) scored.emplace_back(item.id, cosine_similarity(agent.preference, item.topic));
  }
  return top_n(std::move(scored), n);
}

// ----------------------------------------------------------- recommenders

namespace {

class RandomRecommender final : public Recommender {
 public:
  Algorithm algorithm() const override { return Algorithm::Random; }
  std::vector<ContentId> recommend(const RecommendContext& ctx, AgentId u, Step, std::size_t n,
                                   RandomSource& rng) override {
    return recommend_random(u, ctx.catalog, ctx.matrix, n, rng);
  }
};

class PopularityRecommender final : public Recommender {
 public:
  Algorithm algorithm() const override { return Algorithm::Popularity; }
  void prepare(const RecommendContext& ctx, Step step) override {
    ranking_ = popularity_ranking(ctx.catalog, step, ctx.config.popularity_window);
  }
  std::vector<ContentId> recommend(const RecommendContext& ctx, AgentId u, Step, std::size_t n,
                                   RandomSource&) override {
    return recommend_popular(u, ranking_, ctx.catalog, ctx.matrix, n);
  }

 private:
  std::vector<ContentId> ranking_;
};

class UserKnnRecommender final : public Recommender {
 public:
  Algorithm algorithm() const override { return Algorithm::UserKnn; }
  std::vector<ContentId> recommend(const RecommendContext& ctx, AgentId u, Step, std::size_t n,
                                   RandomSource&) override {
    return recommend_user_knn(u, ctx.matrix, ctx.catalog, ctx.config.knn_neighbors, n);
  }
};

class ItemKnnRecommender final : public Recommender {
 public:
  Algorithm algorithm() const override { return Algorithm::ItemKnn; }
  void prepare(const RecommendContext& ctx, Step) override {
    if (!index_) index_.emplace(ctx.config.knn_neighbors);
    index_->sync(ctx.matrix);
  }
  std::vector<ContentId> recommend(const RecommendContext& ctx, AgentId u, Step, std::size_t n,
                                   RandomSource&) override {
    return recommend_item_knn(u, ctx.matrix, ctx.catalog, *index_, n);
  }

 private:
  std::optional<ItemNeighborIndex> index_;
};

class ContentBasedRecommender final : public Recommender {
 public:
  Algorithm algorithm() const override { return Algorithm::ContentBased; }
  std::vector<ContentId> recommend(const RecommendContext& ctx, AgentId u, Step, std::size_t n,
                                   RandomSource&) override {
    if (agents_.size() < ctx.agents.size()) agents_.resize(ctx.agents.size());
    PerAgent& state = agents_[static_cast<std::size_t>(u)];
    const AgentProfile& agent = ctx.agents[static_cast<std::size_t>(u)];
    // Scores depend only on immutable vectors, so rows only ever grow.
    for (std::size_t i = state.scores.size(); i < ctx.catalog.size(); ++i) {
      const auto id = static_cast<ContentId>(i);
      state.scores.push_back(cosine_similarity(agent.preference, ctx.catalog.item(id).topic));
      offer(state, {id, state.scores.back()});
    }

    auto eligible = [&](ContentId id) { return is_eligible(u, ctx.catalog.item(id), ctx.matrix); };
    // Ineligibility is permanent, so stale entries are dropped for good.
    std::erase_if(state.top, [&](const auto& e) { return !eligible(e.first); });
    if (state.top.size() < n && state.bound) {
      ScoredItems scored;
      for (std::size_t i = 0; i < state.scores.size(); ++i) {
        const auto id = static_cast<ContentId>(i);
        if (eligible(id)) scored.emplace_back(id, state.scores[i]);
      }
      const std::size_t keep = std::max(n, kKeep);
      const std::size_t m = std::min(keep + 1, scored.size());
      std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(m), scored.end(), better);
      state.bound.reset();
      if (scored.size() > keep) state.bound = scored[keep];
      scored.resize(std::min(keep, scored.size()));
      state.top = std::move(scored);
    }
    std::vector<ContentId> out;
    for (std::size_t i = 0; i < std::min(n, state.top.size()); ++i) out.push_back(state.top[i].first);
    return out;
  }

 private:
  static constexpr std::size_t kKeep = 64;

  // `top` is the exact head of the agent's eligible ranking; every eligible
  // item outside it ranks no higher than `bound`.
  struct PerAgent {
    std::vector<double> scores;
    ScoredItems top;
    std::optional<std::pair<ContentId, double>> bound;
  };

  static void offer(PerAgent& state, std::pair<ContentId, double> entry) {
    if (state.bound && !better(entry, *state.bound)) return;
    state.top.insert(std::upper_bound(state.top.begin(), state.top.end(), entry, better), entry);
    if (state.top.size() > kKeep) {
      state.bound = state.top.back();
      state.top.pop_back();
    }
  }

  std::vector<PerAgent> agents_;
};

}  // namespace

std::unique_ptr<Recommender> make_recommender(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Random: return std::make_unique<RandomRecommender>();
    case Algorithm::Popularity: return std::make_unique<PopularityRecommender>();
    case Algorithm::UserKnn: return std::make_unique<UserKnnRecommender>();
    case Algorithm::ItemKnn: return std::make_unique<ItemKnnRecommender>();
    case Algorithm::ContentBased: return std::make_unique<ContentBasedRecommender>();
  }
  throw std::invalid_argument("make_recommender: unknown algorithm");
}

bool uses_cold_start_fallback(Algorithm algorithm) {
  return algorithm == Algorithm::UserKnn || algorithm == Algorithm::ItemKnn;
}

}  // namespace misinfo
