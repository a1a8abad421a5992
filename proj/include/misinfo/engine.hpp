#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "misinfo/content.hpp"
#include "misinfo/domain.hpp"
#include "misinfo/metrics.hpp"
#include "misinfo/netgen.hpp"
#include "misinfo/recsys.hpp"

namespace misinfo {

/// Activation draw. On a peak offset (step mod steps_per_day in peak_steps)
/// the probability doubles, capped at 1; bots never use peaks.
bool is_active(const AgentProfile& agent, Step step, int steps_per_day, RandomSource& rng);

/// New feed: shares, then recommendations, then the previous feed, keeping the
/// first occurrence of each id and truncating to `cap`.
std::vector<ContentId> assemble_feed(std::span<const ContentId> feed, std::span<const ContentId> shared,
                                     std::span<const ContentId> recommended, std::size_t cap);

struct ActResult {
  std::vector<InteractionRecord> engagements;
  /// Authored content; its id is assigned when the step is committed.
  std::optional<ContentItem> authored;
  bool engaged_fake = false;
};

/// One active agent's turn against the frozen catalog and matrix: scans up to
/// feed_cap feed items, engaging each eligible one with its interaction
/// probability, then posts with probability post_prob.
ActResult act(const AgentProfile& agent, Step step, const ContentCatalog& catalog, const InteractionMatrix& matrix,
              const SimulationConfig& config, RandomSource& rng);
/// As above, evaluating `to_scan` (a subset of the feed, feed order) instead
/// of the whole feed.
ActResult act(const AgentProfile& agent, std::span<const ContentId> to_scan, Step step, const ContentCatalog& catalog,
              const InteractionMatrix& matrix, const SimulationConfig& config, RandomSource& rng);

/// SEI transition for one agent at the end of a step. Mutates state and
/// infected_since and returns the new state.
///   S/E -> I on engaging fake content this step.
///   I stays I until recovery_window steps have passed since infection, then
///     becomes I again on a fresh fake engagement, else E if the feed holds
///     fake content, else S.
///   S <-> E tracks whether the feed holds fake content.
EpidemicState update_state(AgentProfile& agent, Step step, bool feed_has_fake, bool engaged_fake,
                           int recovery_window);

bool is_legal_transition(EpidemicState from, EpidemicState to);

struct Transition {
  AgentId agent;
  Step step;
  EpidemicState from;
  EpidemicState to;
  std::optional<Step> infected_since_before;
};

/// One simulation run. Owns every piece of mutable state; not thread-safe, but
/// independent instances may run concurrently.
class SimulationModel {
 public:
  /// Validates the config (throws std::invalid_argument listing violations)
  /// and seeds agents, graph and catalog from config.rng_seed.
  explicit SimulationModel(SimulationConfig config);

  SimulationModel(SimulationModel&&) noexcept = default;
  SimulationModel& operator=(SimulationModel&&) noexcept = default;

  /// Advances one step and returns its metrics.
  StepMetricsRow step();
  bool finished() const { return current_step_ >= config_.timesteps; }

  const SimulationConfig& config() const { return config_; }
  std::span<const AgentProfile> agents() const { return agents_; }
  const SocialGraph& graph() const { return graph_; }
  const ContentCatalog& catalog() const { return catalog_; }
  const InteractionMatrix& matrix() const { return matrix_; }
  std::span<const InteractionRecord> log() const { return log_; }
  Step current_step() const { return current_step_; }
  /// Recommendation lists issued in the last step; empty for agents that got none.
  std::span<const std::vector<ContentId>> last_recommendations() const { return recommendations_; }
  /// 1 for agents active in the last step.
  std::span<const std::uint8_t> last_active() const { return active_; }

  /// Called for every state change, in agent id order.
  void set_transition_observer(std::function<void(const Transition&)> observer) {
    observer_ = std::move(observer);
  }

 private:
  SimulationConfig config_;
  std::vector<AgentProfile> agents_;
  SocialGraph graph_;
  ContentCatalog catalog_;
  InteractionMatrix matrix_;
  std::vector<InteractionRecord> log_;
  std::unique_ptr<Recommender> recommender_;
  Step current_step_ = 0;
  std::vector<std::vector<ContentId>> recommendations_;
  std::vector<std::vector<ContentId>> inbox_;
  std::vector<std::vector<ContentId>> unscanned_;
  std::vector<std::uint8_t> active_;
  std::function<void(const Transition&)> observer_;
};

struct RunOutput {
  SimulationModel model;
  std::vector<StepMetricsRow> rows;
};

/// Runs config.timesteps steps from a fresh model.
RunOutput run(const SimulationConfig& config);

}  // namespace misinfo
