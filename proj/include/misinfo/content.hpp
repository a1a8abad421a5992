#pragma once

#include <span>
#include <vector>

#include "misinfo/domain.hpp"

namespace misinfo {

inline constexpr double kEngagementCap = 1.5;

/// Closed-form engagement of `item` at `step`:
///   initial * exp(-decay * age) + sum over engage events s <= step of bump * exp(-decay * (step - s)).
/// Throws std::invalid_argument if step precedes the item's creation.
double engagement(const ContentItem& item, Step step, std::span<const Step> engage_steps = {},
                  double decay = 0.1, double bump = 0.1);

/// All content of a run, indexed by id. Items are append-only and their
/// engagement is tracked incrementally so queries are O(1).
class ContentCatalog {
 public:
  explicit ContentCatalog(double decay = 0.1, double bump = 0.1) : decay_(decay), bump_(bump) {}

  /// Appends `item`; its id must equal size().
  ContentId add(ContentItem item);

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  bool contains(ContentId id) const { return id >= 0 && static_cast<std::size_t>(id) < items_.size(); }
  const ContentItem& item(ContentId id) const { return items_.at(static_cast<std::size_t>(id)); }
  std::span<const ContentItem> items() const { return items_; }

  std::size_t fake_count() const { return fake_count_; }
  double fake_fraction() const;

  /// Steps must be nondecreasing per item.
  void record_engage(ContentId id, Step step);
  std::span<const Step> engage_steps(ContentId id) const { return engage_steps_.at(static_cast<std::size_t>(id)); }
  /// Number of engage events on `id` with step in [lo, hi].
  int engage_count(ContentId id, Step lo, Step hi) const;

  double engagement(ContentId id, Step step) const;

  /// Items created or engaged with during [lo, hi], ascending id.
  std::vector<ContentId> active_in_window(Step lo, Step hi) const;

  double decay() const { return decay_; }
  double bump() const { return bump_; }

 private:
  double decay_;
  double bump_;
  std::vector<ContentItem> items_;
  std::vector<std::vector<Step>> engage_steps_;
  std::vector<double> bump_value_;  // accumulated bumps as of bump_step_
  std::vector<Step> bump_step_;
  std::size_t fake_count_ = 0;
};

/// Initial pool: initial_news items at step 0, round(initial_news * misinfo_pct)
/// of them fake at shuffled positions, topics uniform on the sphere.
ContentCatalog seed_catalog(const SimulationConfig& config, RandomSource& rng);

/// Topic for content authored by an agent: normalize(preference + noise * N(0, I)).
std::vector<double> authored_topic(std::span<const double> preference, double noise, RandomSource& rng);

/// max(cos(preference, topic), 0) * credibility * min(engagement, 1.5).
double evaluate(const AgentProfile& agent, const ContentItem& item, double engagement_value);

/// clamp(evaluate / 1.5 * m, 0, 1) with m = 1 for real content and
/// m = (0.5 + naivety) * fake_share_factor(kind) for fake content.
double interaction_probability(const AgentProfile& agent, const ContentItem& item, double engagement_value,
                               const SimulationConfig& config);

}  // namespace misinfo
