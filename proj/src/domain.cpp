#include "misinfo/domain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace misinfo {

std::string_view to_string(AgentKind kind) {
  switch (kind) {
    case AgentKind::Regular: return "regular";
    case AgentKind::Bot: return "bot";
    case AgentKind::Influencer: return "influencer";
  }
  return "unknown";
}

std::string_view to_string(EpidemicState state) {
  switch (state) {
    case EpidemicState::Susceptible: return "S";
    case EpidemicState::Exposed: return "E";
    case EpidemicState::Infected: return "I";
  }
  return "?";
}

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::Random: return "random";
    case Algorithm::Popularity: return "popularity";
    case Algorithm::UserKnn: return "user_knn";
    case Algorithm::ItemKnn: return "item_knn";
    case Algorithm::ContentBased: return "content_based";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  for (Algorithm a : kAllAlgorithms) {
    if (to_string(a) == name) return a;
  }
  return std::nullopt;
}

std::optional<AgentKind> parse_agent_kind(std::string_view name) {
  for (AgentKind k : {AgentKind::Regular, AgentKind::Bot, AgentKind::Influencer}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

namespace {

void check_unit(std::vector<std::string>& out, std::string_view name, double v) {
  if (!(v >= 0.0 && v <= 1.0)) out.push_back(std::string(name) + " must be in [0, 1]");
}

void check_positive(std::vector<std::string>& out, std::string_view name, double v) {
  if (!(v > 0.0)) out.push_back(std::string(name) + " must be positive");
}

}  // namespace

std::vector<std::string> validate_config(const SimulationConfig& c) {
  std::vector<std::string> out;
  check_positive(out, "timesteps", c.timesteps);
  check_positive(out, "n_users", c.n_users);
  check_positive(out, "avg_followers", c.avg_followers);
  check_positive(out, "initial_news", c.initial_news);
  check_positive(out, "recs_per_step", c.recs_per_step);
  check_positive(out, "topic_dim", c.topic_dim);
  check_positive(out, "feed_cap", c.feed_cap);
  check_positive(out, "steps_per_day", c.steps_per_day);
  check_positive(out, "infection_recovery_window", c.infection_recovery_window);
  check_positive(out, "knn_neighbors", c.knn_neighbors);
  check_positive(out, "popularity_window", c.popularity_window);
  if (c.cold_start_min_interactions < 0) out.push_back("cold_start_min_interactions must be nonnegative");
  if (!(c.engagement_decay >= 0.0)) out.push_back("engagement_decay must be nonnegative");
  if (!(c.engagement_bump >= 0.0)) out.push_back("engagement_bump must be nonnegative");
  if (!(c.authored_topic_noise >= 0.0)) out.push_back("authored_topic_noise must be nonnegative");
  if (c.influencer_peak_count < 1 || c.influencer_peak_count > c.steps_per_day) {
    out.push_back("influencer_peak_count must be in [1, steps_per_day]");
  }

  check_unit(out, "misinfo_pct", c.misinfo_pct);
  check_unit(out, "bot_pct", c.bot_pct);
  check_unit(out, "influencer_pct", c.influencer_pct);
  if (c.bot_pct + c.influencer_pct >= 1.0) out.push_back("bot_pct + influencer_pct must be below 1");

  for (AgentKind k : {AgentKind::Regular, AgentKind::Bot, AgentKind::Influencer}) {
    const KindParams& p = c.params(k);
    const std::string prefix = std::string(to_string(k)) + ".";
    check_unit(out, prefix + "activity_lo", p.activity_lo);
    check_unit(out, prefix + "activity_hi", p.activity_hi);
    check_unit(out, prefix + "naivety_lo", p.naivety_lo);
    check_unit(out, prefix + "naivety_hi", p.naivety_hi);
    check_unit(out, prefix + "post_prob", p.post_prob);
    check_unit(out, prefix + "post_misinfo_prob", p.post_misinfo_prob);
    if (p.activity_lo > p.activity_hi) out.push_back(prefix + "activity range is inverted");
    if (p.naivety_lo > p.naivety_hi) out.push_back(prefix + "naivety range is inverted");
    check_positive(out, prefix + "follow_boost", p.follow_boost);
    if (!(p.fake_share_factor >= 0.0)) out.push_back(prefix + "fake_share_factor must be nonnegative");
  }
  return out;
}

void normalize(std::vector<double>& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  if (!(sq > 0.0)) throw std::invalid_argument("normalize: zero vector");
  const double inv = 1.0 / std::sqrt(sq);
  for (double& x : v) x *= inv;
}

std::vector<double> sample_unit_vector(int dim, RandomSource& rng) {
  if (dim < 1) throw std::invalid_argument("sample_unit_vector: dim must be >= 1");
  std::vector<double> v(static_cast<std::size_t>(dim));
  for (;;) {
    for (double& x : v) x = rng.normal();
    double sq = 0.0;
    for (double x : v) sq += x * x;
    if (sq > 1e-300) break;
  }
  normalize(v);
  return v;
}

double credibility_from_naivety(double naivety) {
  return std::clamp(1.0 - 0.5 * naivety, 1e-6, 1.0);
}

void to_json(nlohmann::json& j, const AgentProfile& a) {
  j = nlohmann::json{{"id", a.id},
                     {"kind", to_string(a.kind)},
                     {"activity_prob", a.activity_prob},
                     {"naivety", a.naivety},
                     {"credibility", a.credibility},
                     {"post_prob", a.post_prob},
                     {"post_misinfo_prob", a.post_misinfo_prob},
                     {"preference", a.preference},
                     {"peak_steps", a.peak_steps},
                     {"state", to_string(a.state)},
                     {"feed", a.feed}};
  j["infected_since"] = a.infected_since ? nlohmann::json(*a.infected_since) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, AgentProfile& a) {
  a.id = j.at("id").get<AgentId>();
  const auto kind = parse_agent_kind(j.at("kind").get<std::string>());
  if (!kind) throw std::invalid_argument("unknown agent kind");
  a.kind = *kind;
  a.activity_prob = j.at("activity_prob").get<double>();
  a.naivety = j.at("naivety").get<double>();
  a.credibility = j.at("credibility").get<double>();
  a.post_prob = j.at("post_prob").get<double>();
  a.post_misinfo_prob = j.at("post_misinfo_prob").get<double>();
  a.preference = j.at("preference").get<std::vector<double>>();
  a.peak_steps = j.at("peak_steps").get<std::vector<int>>();
  const auto state = j.at("state").get<std::string>();
  if (state == "S") a.state = EpidemicState::Susceptible;
  else if (state == "E") a.state = EpidemicState::Exposed;
  else if (state == "I") a.state = EpidemicState::Infected;
  else throw std::invalid_argument("unknown epidemic state: " + state);
  a.feed = j.at("feed").get<std::vector<ContentId>>();
  const auto& since = j.at("infected_since");
  a.infected_since = since.is_null() ? std::nullopt : std::optional<Step>(since.get<Step>());
}

void to_json(nlohmann::json& j, const ContentItem& c) {
  j = nlohmann::json{{"id", c.id},
                     {"is_fake", c.is_fake},
                     {"topic", c.topic},
                     {"initial_engagement", c.initial_engagement},
                     {"creation_step", c.creation_step}};
  j["author"] = c.author ? nlohmann::json(*c.author) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, ContentItem& c) {
  c.id = j.at("id").get<ContentId>();
  c.is_fake = j.at("is_fake").get<bool>();
  c.topic = j.at("topic").get<std::vector<double>>();
  c.initial_engagement = j.at("initial_engagement").get<double>();
  c.creation_step = j.at("creation_step").get<Step>();
  const auto& author = j.at("author");
  c.author = author.is_null() ? std::nullopt : std::optional<AgentId>(author.get<AgentId>());
}

}  // namespace misinfo
