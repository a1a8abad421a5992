#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "misinfo/rng.hpp"

namespace misinfo {

using AgentId = std::int32_t;
using ContentId = std::int32_t;
using Step = std::int32_t;

enum class AgentKind : std::uint8_t { Regular = 0, Bot = 1, Influencer = 2 };
inline constexpr std::size_t kAgentKindCount = 3;

enum class EpidemicState : std::uint8_t { Susceptible = 0, Exposed = 1, Infected = 2 };

enum class Algorithm : std::uint8_t { Random = 0, Popularity = 1, UserKnn = 2, ItemKnn = 3, ContentBased = 4 };
inline constexpr std::array<Algorithm, 5> kAllAlgorithms = {
    Algorithm::Random, Algorithm::Popularity, Algorithm::UserKnn, Algorithm::ItemKnn, Algorithm::ContentBased};

std::string_view to_string(AgentKind kind);
std::string_view to_string(EpidemicState state);
/// CLI name: random | popularity | user_knn | item_knn | content_based.
std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);
std::optional<AgentKind> parse_agent_kind(std::string_view name);

struct AgentProfile {
  AgentId id = 0;
  AgentKind kind = AgentKind::Regular;
  double activity_prob = 0.0;
  double naivety = 0.0;
  double credibility = 1.0;
  double post_prob = 0.0;
  double post_misinfo_prob = 0.0;
  std::vector<double> preference;
  /// Sorted step-of-day offsets at which activity doubles.
  std::vector<int> peak_steps;
  EpidemicState state = EpidemicState::Susceptible;
  std::optional<Step> infected_since;
  /// Newest first.
  std::vector<ContentId> feed;

  bool operator==(const AgentProfile&) const = default;
};

struct ContentItem {
  ContentId id = 0;
  bool is_fake = false;
  std::vector<double> topic;
  double initial_engagement = 1.0;
  Step creation_step = 0;
  std::optional<AgentId> author;

  bool operator==(const ContentItem&) const = default;
};

inline constexpr double kRealInitialEngagement = 1.0;
inline constexpr double kFakeInitialEngagement = 1.5;

inline double initial_engagement_for(bool is_fake) {
  return is_fake ? kFakeInitialEngagement : kRealInitialEngagement;
}

enum class InteractionKind : std::uint8_t { View = 0, Engage = 1 };

struct InteractionRecord {
  AgentId agent = 0;
  ContentId content = 0;
  Step step = 0;
  InteractionKind kind = InteractionKind::Engage;

  bool operator==(const InteractionRecord&) const = default;
};

/// Per-kind behavioural parameters. Ranges are sampled uniformly.
struct KindParams {
  double activity_lo = 0.0;
  double activity_hi = 0.0;
  double naivety_lo = 0.0;
  double naivety_hi = 0.0;
  double post_prob = 0.0;
  double post_misinfo_prob = 0.0;
  /// Multiplier on the follow weight of agents of this kind.
  double follow_boost = 1.0;
  /// Multiplier on the probability of engaging fake content.
  double fake_share_factor = 1.0;

  bool operator==(const KindParams&) const = default;
};

struct SimulationConfig {
  int timesteps = 600;
  int n_users = 200;
  double avg_followers = 6.0;
  int initial_news = 400;
  double misinfo_pct = 0.10;
  double bot_pct = 0.07;
  double influencer_pct = 0.03;
  int recs_per_step = 10;

  int topic_dim = 16;
  int feed_cap = 50;
  int steps_per_day = 24;
  int infection_recovery_window = 40;
  int knn_neighbors = 20;
  int popularity_window = 20;
  int cold_start_min_interactions = 3;
  double engagement_decay = 0.1;
  double engagement_bump = 0.1;
  /// Noise scale when an agent authors content near its own preferences.
  double authored_topic_noise = 0.25;
  int influencer_peak_count = 2;
  /// An active agent evaluates only feed entries that arrived since its
  /// previous activation. When false it rescans the whole feed every time.
  bool scan_new_only = true;

  std::uint64_t rng_seed = 20240601;
  Algorithm algorithm = Algorithm::Random;

  std::array<KindParams, kAgentKindCount> kinds = {
      // activity        naivety     post  misinfo boost fake factor
      KindParams{0.1, 0.7, 0.3, 0.6, 0.05, 0.10, 1.0, 1.0},
      KindParams{0.4, 0.9, 0.6, 0.9, 0.15, 0.60, 0.5, 2.0},
      KindParams{0.3, 0.8, 0.3, 0.6, 0.10, 0.02, 20.0, 0.3},
  };

  const KindParams& params(AgentKind kind) const { return kinds[static_cast<std::size_t>(kind)]; }
  KindParams& params(AgentKind kind) { return kinds[static_cast<std::size_t>(kind)]; }

  bool operator==(const SimulationConfig&) const = default;
};

/// Every violated constraint, one message each. Empty iff the config is usable.
std::vector<std::string> validate_config(const SimulationConfig& config);

/// Uniform direction on the unit sphere in `dim` dimensions.
std::vector<double> sample_unit_vector(int dim, RandomSource& rng);

/// Scales `v` to unit L2 norm; throws on a zero vector.
void normalize(std::vector<double>& v);

double credibility_from_naivety(double naivety);

void to_json(nlohmann::json& j, const AgentProfile& a);
void from_json(const nlohmann::json& j, AgentProfile& a);
void to_json(nlohmann::json& j, const ContentItem& c);
void from_json(const nlohmann::json& j, ContentItem& c);

}  // namespace misinfo
