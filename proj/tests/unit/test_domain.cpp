#include <doctest.h>

#include <cmath>

#include "misinfo/domain.hpp"

using namespace misinfo;

TEST_CASE("names round trip") {
  for (Algorithm a : kAllAlgorithms) CHECK(parse_algorithm(to_string(a)) == a);
  CHECK(to_string(Algorithm::UserKnn) == "user_knn");
  CHECK(to_string(Algorithm::ContentBased) == "content_based");
  CHECK_FALSE(parse_algorithm("knn").has_value());
  CHECK(parse_agent_kind("influencer") == AgentKind::Influencer);
  CHECK_FALSE(parse_agent_kind("cyborg").has_value());
  CHECK(to_string(EpidemicState::Exposed) == "E");
}

TEST_CASE("validate_config") {
  SimulationConfig c;
  CHECK(validate_config(c).empty());

  SUBCASE("percentages summing past one") {
    c.bot_pct = 0.6;
    c.influencer_pct = 0.5;
    CHECK(validate_config(c).size() == 1);
  }
  SUBCASE("zero timesteps") {
    c.timesteps = 0;
    CHECK(validate_config(c).size() == 1);
  }
  SUBCASE("percentage above one") {
    c.misinfo_pct = 1.5;
    CHECK(validate_config(c).size() == 1);
  }
  SUBCASE("every violation is listed") {
    c.n_users = 0;
    c.feed_cap = -1;
    c.params(AgentKind::Bot).naivety_lo = 0.95;
    CHECK(validate_config(c).size() == 3);
  }
}

TEST_CASE("defaults follow the parameter table") {
  const SimulationConfig c;
  CHECK(c.timesteps == 600);
  CHECK(c.n_users == 200);
  CHECK(c.avg_followers == 6.0);
  CHECK(c.initial_news == 400);
  CHECK(c.misinfo_pct == 0.10);
  CHECK(c.bot_pct == 0.07);
  CHECK(c.influencer_pct == 0.03);
  CHECK(c.recs_per_step == 10);
  CHECK(c.infection_recovery_window == 40);
}

TEST_CASE("sample_unit_vector") {
  auto rng = RandomSource::stream(11, {});
  for (int dim : {1, 2, 16, 64}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto v = sample_unit_vector(dim, rng);
      REQUIRE(v.size() == static_cast<std::size_t>(dim));
      double sq = 0.0;
      for (double x : v) sq += x * x;
      CHECK(std::abs(std::sqrt(sq) - 1.0) < 1e-9);
      if (dim == 1) CHECK(std::abs(std::abs(v[0]) - 1.0) < 1e-15);
    }
  }
  auto a = RandomSource::stream(12, {});
  auto b = RandomSource::stream(12, {});
  CHECK(sample_unit_vector(16, a) == sample_unit_vector(16, b));
  CHECK_THROWS_AS(sample_unit_vector(0, a), std::invalid_argument);
}

TEST_CASE("normalize rejects the zero vector") {
  std::vector<double> v{3.0, 4.0};
  normalize(v);
  CHECK(v[0] == doctest::Approx(0.6));
  CHECK(v[1] == doctest::Approx(0.8));
  std::vector<double> z{0.0, 0.0};
  CHECK_THROWS_AS(normalize(z), std::invalid_argument);
}

TEST_CASE("credibility falls with naivety") {
  CHECK(credibility_from_naivety(0.0) == 1.0);
  CHECK(credibility_from_naivety(0.5) == 0.75);
  CHECK(credibility_from_naivety(1.0) == 0.5);
  CHECK(credibility_from_naivety(0.3) > credibility_from_naivety(0.6));
}

TEST_CASE("json round trip") {
  AgentProfile a;
  a.id = 17;
  a.kind = AgentKind::Bot;
  a.activity_prob = 0.123456789012345;
  a.naivety = 0.7;
  a.credibility = 0.65;
  a.post_prob = 0.15;
  a.post_misinfo_prob = 0.6;
  a.preference = {0.6, -0.8};
  a.peak_steps = {3, 17};
  a.state = EpidemicState::Infected;
  a.infected_since = 42;
  a.feed = {9, 4, 1};
  CHECK(nlohmann::json(a).get<AgentProfile>() == a);
  a.state = EpidemicState::Susceptible;
  a.infected_since.reset();
  CHECK(nlohmann::json::parse(nlohmann::json(a).dump()).get<AgentProfile>() == a);

  ContentItem c;
  c.id = 401;
  c.is_fake = true;
  c.topic = {1.0 / 3, 2.0 / 3, 2.0 / 3};
  c.initial_engagement = 1.5;
  c.creation_step = 12;
  c.author = 5;
  CHECK(nlohmann::json::parse(nlohmann::json(c).dump()).get<ContentItem>() == c);
  c.author.reset();
  CHECK(nlohmann::json(c).get<ContentItem>() == c);

  auto bad = nlohmann::json(a);
  bad["state"] = "R";
  CHECK_THROWS(bad.get<AgentProfile>());
}
