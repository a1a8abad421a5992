#include "misinfo/engine.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace misinfo {

namespace {

// Substream purposes. Values are part of the reproducibility contract.
enum StreamTag : std::uint64_t {
  kAgentsStream = 1,
  kGraphStream = 2,
  kCatalogStream = 3,
  kActivityStream = 10,
  kRecommendStream = 11,
  kActStream = 12,
};

bool feed_has_fake(const AgentProfile& agent, const ContentCatalog& catalog) {
  return std::any_of(agent.feed.begin(), agent.feed.end(), [&](ContentId id) { return catalog.item(id).is_fake; });
}

}  // namespace

bool is_active(const AgentProfile& agent, Step step, int steps_per_day, RandomSource& rng) {
  double p = agent.activity_prob;
  if (agent.kind != AgentKind::Bot && steps_per_day > 0) {
    const int offset = step % steps_per_day;
    if (std::binary_search(agent.peak_steps.begin(), agent.peak_steps.end(), offset)) p = std::min(1.0, 2.0 * p);
  }
  return rng.uniform() < p;
}

std::vector<ContentId> assemble_feed(std::span<const ContentId> feed, std::span<const ContentId> shared,
                                     std::span<const ContentId> recommended, std::size_t cap) {
  std::vector<ContentId> out;
  out.reserve(std::min(cap, feed.size() + shared.size() + recommended.size()));
  std::unordered_set<ContentId> seen;
  for (auto part : {shared, recommended, feed}) {
    for (ContentId id : part) {
      if (out.size() >= cap) return out;
      if (seen.insert(id).second) out.push_back(id);
    }
  }
  return out;
}

ActResult act(const AgentProfile& agent, Step step, const ContentCatalog& catalog, const InteractionMatrix& matrix,
              const SimulationConfig& config, RandomSource& rng) {
  return act(agent, agent.feed, step, catalog, matrix, config, rng);
}

ActResult act(const AgentProfile& agent, std::span<const ContentId> to_scan, Step step, const ContentCatalog& catalog,
              const InteractionMatrix& matrix, const SimulationConfig& config, RandomSource& rng) {
  ActResult result;
  const std::size_t scan = std::min(to_scan.size(), static_cast<std::size_t>(config.feed_cap));
  for (std::size_t k = 0; k < scan; ++k) {
    const ContentId id = to_scan[k];
    const ContentItem& item = catalog.item(id);
    if (!is_eligible(agent.id, item, matrix)) continue;
    const double p = interaction_probability(agent, item, catalog.engagement(id, step), config);
    if (rng.uniform() < p) {
      result.engagements.push_back({agent.id, id, step, InteractionKind::Engage});
      result.engaged_fake = result.engaged_fake || item.is_fake;
    }
  }
  if (rng.bernoulli(agent.post_prob)) {
    ContentItem item;
    item.is_fake = rng.bernoulli(agent.post_misinfo_prob);
    item.topic = authored_topic(agent.preference, config.authored_topic_noise, rng);
    item.initial_engagement = initial_engagement_for(item.is_fake);
    item.creation_step = step;
    item.author = agent.id;
    result.authored = std::move(item);
  }
  return result;
}

EpidemicState update_state(AgentProfile& agent, Step step, bool has_fake, bool engaged_fake, int recovery_window) {
  if (agent.state == EpidemicState::Infected) {
    if (!agent.infected_since || step - *agent.infected_since < recovery_window) return agent.state;
    if (engaged_fake) {
      agent.infected_since = step;
      return agent.state;
    }
    agent.infected_since.reset();
    agent.state = has_fake ? EpidemicState::Exposed : EpidemicState::Susceptible;
    return agent.state;
  }
  if (engaged_fake) {
    agent.state = EpidemicState::Infected;
    agent.infected_since = step;
  } else {
    agent.state = has_fake ? EpidemicState::Exposed : EpidemicState::Susceptible;
  }
  return agent.state;
}

bool is_legal_transition(EpidemicState from, EpidemicState to) {
  // Everything except staying put is one of the six legal moves; E->E etc. are
  // not transitions.
  return from != to;
}

SimulationModel::SimulationModel(SimulationConfig config) : config_(std::move(config)) {
  // A zero-step model is a valid (empty) run even though batch configs reject it.
  SimulationConfig checked = config_;
  if (checked.timesteps == 0) checked.timesteps = 1;
  if (const auto errors = validate_config(checked); !errors.empty()) {
    std::ostringstream msg;
    msg << "invalid configuration:";
    for (const auto& e : errors) msg << "\n  " << e;
    throw std::invalid_argument(msg.str());
  }
  const std::uint64_t seed = config_.rng_seed;
  auto agent_rng = RandomSource::stream(seed, {kAgentsStream});
  agents_ = generate_agents(config_, agent_rng);
  if (agents_.size() >= 2) {
    auto graph_rng = RandomSource::stream(seed, {kGraphStream});
    graph_ = generate_graph(agents_, config_, graph_rng);
  } else {
    graph_ = SocialGraph(static_cast<int>(agents_.size()), {});
  }
  auto catalog_rng = RandomSource::stream(seed, {kCatalogStream});
  catalog_ = seed_catalog(config_, catalog_rng);
  matrix_ = InteractionMatrix(config_.n_users);
  recommender_ = make_recommender(config_.algorithm);
  recommendations_.resize(agents_.size());
  inbox_.resize(agents_.size());
  unscanned_.resize(agents_.size());
  active_.assign(agents_.size(), 0);
}

StepMetricsRow SimulationModel::step() {
  const Step t = ++current_step_;
  const std::uint64_t seed = config_.rng_seed;
  const auto n = agents_.size();
  const auto n_recs = static_cast<std::size_t>(config_.recs_per_step);

  for (std::size_t u = 0; u < n; ++u) {
    auto rng = RandomSource::stream(seed, {kActivityStream, static_cast<std::uint64_t>(t), u});
    active_[u] = is_active(agents_[u], t, config_.steps_per_day, rng) ? 1 : 0;
  }

  // Recommendations against the frozen snapshot.
  const RecommendContext ctx{config_, agents_, catalog_, matrix_};
  recommender_->prepare(ctx, t);
  std::vector<ContentId> all_recommended;
  for (std::size_t u = 0; u < n; ++u) {
    auto& recs = recommendations_[u];
    recs.clear();
    if (!active_[u]) continue;
    const auto id = static_cast<AgentId>(u);
    auto rng = RandomSource::stream(seed, {kRecommendStream, static_cast<std::uint64_t>(t), u});
    const bool cold = uses_cold_start_fallback(config_.algorithm) &&
                      matrix_.count(id) < static_cast<std::size_t>(config_.cold_start_min_interactions);
    recs = cold ? recommend_random(id, catalog_, matrix_, n_recs, rng) : recommender_->recommend(ctx, id, t, n_recs, rng);
    if (recs.size() > n_recs) recs.resize(n_recs);
    all_recommended.insert(all_recommended.end(), recs.begin(), recs.end());
  }
  StepMetricsRow row;
  row.step = t;
  row.mrd = mrd(all_recommended, catalog_);
  row.mc = mc(recommendations_, catalog_);

  for (std::size_t u = 0; u < n; ++u) {
    agents_[u].feed = assemble_feed(agents_[u].feed, inbox_[u], recommendations_[u],
                                    static_cast<std::size_t>(config_.feed_cap));
    if (config_.scan_new_only) {
      auto& pending = unscanned_[u];
      pending.insert(pending.end(), inbox_[u].begin(), inbox_[u].end());
      pending.insert(pending.end(), recommendations_[u].begin(), recommendations_[u].end());
    }
    inbox_[u].clear();
  }

  std::vector<ActResult> results(n);
  std::vector<ContentId> to_scan;
  for (std::size_t u = 0; u < n; ++u) {
    if (!active_[u]) continue;
    auto rng = RandomSource::stream(seed, {kActStream, static_cast<std::uint64_t>(t), u});
    if (config_.scan_new_only) {
      // Feed order, restricted to entries that arrived since the last activation.
      std::unordered_set<ContentId> fresh(unscanned_[u].begin(), unscanned_[u].end());
      to_scan.clear();
      for (ContentId id : agents_[u].feed) {
        if (fresh.contains(id)) to_scan.push_back(id);
      }
      unscanned_[u].clear();
      results[u] = act(agents_[u], to_scan, t, catalog_, matrix_, config_, rng);
    } else {
      results[u] = act(agents_[u], t, catalog_, matrix_, config_, rng);
    }
  }

  // Commit in canonical agent order; shares and new posts reach followers'
  // feeds at the next step.
  for (std::size_t u = 0; u < n; ++u) {
    auto& r = results[u];
    const auto followers = graph_.followers(static_cast<AgentId>(u));
    for (const auto& rec : r.engagements) {
      if (!matrix_.add(rec.agent, rec.content)) continue;
      log_.push_back(rec);
      catalog_.record_engage(rec.content, t);
      ++row.n_interactions_step;
      for (AgentId f : followers) inbox_[static_cast<std::size_t>(f)].push_back(rec.content);
    }
    if (r.authored) {
      r.authored->id = static_cast<ContentId>(catalog_.size());
      const ContentId id = catalog_.add(std::move(*r.authored));
      for (AgentId f : followers) inbox_[static_cast<std::size_t>(f)].push_back(id);
    }
  }

  for (std::size_t u = 0; u < n; ++u) {
    AgentProfile& a = agents_[u];
    const EpidemicState before = a.state;
    const auto since_before = a.infected_since;
    update_state(a, t, feed_has_fake(a, catalog_), results[u].engaged_fake, config_.infection_recovery_window);
    if (observer_ && (a.state != before || a.infected_since != since_before)) {
      observer_({a.id, t, before, a.state, since_before});
    }
    switch (a.state) {
      case EpidemicState::Susceptible: ++row.n_susceptible; break;
      case EpidemicState::Exposed: ++row.n_exposed; break;
      case EpidemicState::Infected: ++row.n_infected; break;
    }
  }
  row.msp = msp(row.n_infected, static_cast<int>(n));
  row.n_contents = static_cast<int>(catalog_.size());
  row.n_fake_contents = static_cast<int>(catalog_.fake_count());
  return row;
}

RunOutput run(const SimulationConfig& config) {
  RunOutput out{SimulationModel(config), {}};
  out.rows.reserve(static_cast<std::size_t>(std::max(config.timesteps, 0)));
  while (!out.model.finished()) out.rows.push_back(out.model.step());
  return out;
}

}  // namespace misinfo
