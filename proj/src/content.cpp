#include "misinfo/content.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "misinfo/netgen.hpp"

namespace misinfo {

double engagement(const ContentItem& item, Step step, std::span<const Step> engage_steps, double decay,
                  double bump) {
  if (step < item.creation_step) {
    throw std::invalid_argument("engagement: step " + std::to_string(step) + " precedes creation step " +
                                std::to_string(item.creation_step));
  }
  double value = item.initial_engagement * std::exp(-decay * (step - item.creation_step));
  for (Step s : engage_steps) {
    if (s <= step) value += bump * std::exp(-decay * (step - s));
  }
  return value;
}

ContentId ContentCatalog::add(ContentItem item) {
  if (item.id != static_cast<ContentId>(items_.size())) {
    throw std::invalid_argument("ContentCatalog::add: expected id " + std::to_string(items_.size()));
  }
  if (item.is_fake) ++fake_count_;
  items_.push_back(std::move(item));
  engage_steps_.emplace_back();
  bump_value_.push_back(0.0);
  bump_step_.push_back(items_.back().creation_step);
  return items_.back().id;
}

double ContentCatalog::fake_fraction() const {
  return items_.empty() ? 0.0 : static_cast<double>(fake_count_) / static_cast<double>(items_.size());
}

void ContentCatalog::record_engage(ContentId id, Step step) {
  const auto i = static_cast<std::size_t>(id);
  auto& steps = engage_steps_.at(i);
  if (!steps.empty() && step < steps.back()) {
    throw std::invalid_argument("ContentCatalog::record_engage: steps must be nondecreasing");
  }
  steps.push_back(step);
  bump_value_[i] = bump_value_[i] * std::exp(-decay_ * (step - bump_step_[i])) + bump_;
  bump_step_[i] = step;
}

int ContentCatalog::engage_count(ContentId id, Step lo, Step hi) const {
  const auto steps = engage_steps(id);
  const auto first = std::lower_bound(steps.begin(), steps.end(), lo);
  const auto last = std::upper_bound(first, steps.end(), hi);
  return static_cast<int>(last - first);
}

double ContentCatalog::engagement(ContentId id, Step step) const {
  const auto i = static_cast<std::size_t>(id);
  const ContentItem& it = items_.at(i);
  if (step < bump_step_[i]) {
    // Historical query before the latest event: fall back to the closed form.
    return misinfo::engagement(it, step, engage_steps_[i], decay_, bump_);
  }
  return it.initial_engagement * std::exp(-decay_ * (step - it.creation_step)) +
         bump_value_[i] * std::exp(-decay_ * (step - bump_step_[i]));
}

std::vector<ContentId> ContentCatalog::active_in_window(Step lo, Step hi) const {
  std::vector<ContentId> out;
  for (const auto& it : items_) {
    const bool created = it.creation_step >= lo && it.creation_step <= hi;
    if (created || engage_count(it.id, lo, hi) > 0) out.push_back(it.id);
  }
  return out;
}

ContentCatalog seed_catalog(const SimulationConfig& config, RandomSource& rng) {
  const int n = config.initial_news;
  const int n_fake = std::min(n, static_cast<int>(std::lround(n * config.misinfo_pct)));
  std::vector<bool> fake(static_cast<std::size_t>(n), false);
  std::fill_n(fake.begin(), n_fake, true);
  for (std::size_t i = fake.size(); i > 1; --i) {
    const auto j = rng.below(i);
    const bool tmp = fake[i - 1];
    fake[i - 1] = fake[j];
    fake[j] = tmp;
  }

  ContentCatalog catalog(config.engagement_decay, config.engagement_bump);
  for (ContentId id = 0; id < n; ++id) {
    ContentItem item;
    item.id = id;
    item.is_fake = fake[static_cast<std::size_t>(id)];
    item.topic = sample_unit_vector(config.topic_dim, rng);
    item.initial_engagement = initial_engagement_for(item.is_fake);
    item.creation_step = 0;
    catalog.add(std::move(item));
  }
  return catalog;
}

std::vector<double> authored_topic(std::span<const double> preference, double noise, RandomSource& rng) {
  std::vector<double> topic(preference.begin(), preference.end());
  for (;;) {
    for (std::size_t i = 0; i < topic.size(); ++i) topic[i] = preference[i] + noise * rng.normal();
    double sq = 0.0;
    for (double x : topic) sq += x * x;
    if (sq > 1e-300) break;
  }
  normalize(topic);
  return topic;
}

double evaluate(const AgentProfile& agent, const ContentItem& item, double engagement_value) {
  const double sim = std::max(cosine_similarity(agent.preference, item.topic), 0.0);
  return sim * agent.credibility * std::min(engagement_value, kEngagementCap);
}

double interaction_probability(const AgentProfile& agent, const ContentItem& item, double engagement_value,
                               const SimulationConfig& config) {
  double m = 1.0;
  if (item.is_fake) m = (0.5 + agent.naivety) * config.params(agent.kind).fake_share_factor;
  return std::clamp(evaluate(agent, item, engagement_value) / kEngagementCap * m, 0.0, 1.0);
}

}  // namespace misinfo
