#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "misinfo/netgen.hpp"

using namespace misinfo;

namespace {

struct Population {
  std::vector<AgentProfile> agents;
  SocialGraph graph;
};

Population make_population(std::uint64_t seed, const SimulationConfig& config = {}) {
  auto arng = RandomSource::stream(seed, {1});
  auto grng = RandomSource::stream(seed, {2});
  Population p;
  p.agents = generate_agents(config, arng);
  p.graph = generate_graph(p.agents, config, grng);
  return p;
}

double mean_in_degree(const Population& p, AgentKind kind) {
  double sum = 0.0;
  int count = 0;
  for (const auto& a : p.agents) {
    if (a.kind != kind) continue;
    sum += static_cast<double>(p.graph.followers(a.id).size());
    ++count;
  }
  return sum / count;
}

// Average ranks, ties shared.
std::vector<double> ranks(const std::vector<double>& xs) {
  std::vector<std::size_t> idx(xs.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && xs[idx[j + 1]] == xs[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (static_cast<double>(i + j) / 2.0) + 1.0;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

TEST_CASE("cosine_similarity") {
  const std::vector<double> v{0.3, -1.2, 2.0};
  CHECK(cosine_similarity(v, v) == doctest::Approx(1.0));
  CHECK(cosine_similarity(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(cosine_similarity(std::vector<double>{h, h}, std::vector<double>{1, 0}) - 0.7071) < 1e-4);
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(cosine_similarity(std::vector<double>{1}, std::vector<double>{1, 0}), std::invalid_argument);
}

TEST_CASE("generate_agents") {
  const SimulationConfig config;
  auto rng = RandomSource::stream(5, {});
  const auto agents = generate_agents(config, rng);
  REQUIRE(agents.size() == 200);
  int counts[3] = {0, 0, 0};
  for (const auto& a : agents) {
    ++counts[static_cast<int>(a.kind)];
    const KindParams& p = config.params(a.kind);
    CHECK(a.activity_prob >= p.activity_lo);
    CHECK(a.activity_prob <= p.activity_hi);
    CHECK(a.naivety >= p.naivety_lo);
    CHECK(a.naivety <= p.naivety_hi);
    CHECK(a.credibility == credibility_from_naivety(a.naivety));
    CHECK(a.state == EpidemicState::Susceptible);
    CHECK(a.feed.empty());
    CHECK_FALSE(a.infected_since.has_value());
    double sq = 0.0;
    for (double x : a.preference) sq += x * x;
    CHECK(std::abs(std::sqrt(sq) - 1.0) < 1e-9);
    CHECK(std::is_sorted(a.peak_steps.begin(), a.peak_steps.end()));
    for (int s : a.peak_steps) {
      CHECK(s >= 0);
      CHECK(s < config.steps_per_day);
    }
    if (a.kind == AgentKind::Regular) {
      CHECK(a.peak_steps.size() >= 1);
      CHECK(a.peak_steps.size() <= 3);
    }
    if (a.kind == AgentKind::Bot) CHECK(a.peak_steps.empty());
    if (a.kind == AgentKind::Influencer) CHECK(a.peak_steps.size() == 2);
  }
  CHECK(counts[0] == 180);
  CHECK(counts[1] == 14);
  CHECK(counts[2] == 6);

  auto again = RandomSource::stream(5, {});
  CHECK(generate_agents(config, again) == agents);

  SimulationConfig one;
  one.n_users = 1;
  auto r1 = RandomSource::stream(5, {});
  const auto single = generate_agents(one, r1);
  REQUIRE(single.size() == 1);
  CHECK(single[0].kind == AgentKind::Regular);
}

TEST_CASE("influencer peaks sit at the busiest regular offsets") {
  auto rng = RandomSource::stream(8, {});
  const auto agents = generate_agents(SimulationConfig{}, rng);
  std::vector<int> traffic(24, 0);
  for (const auto& a : agents) {
    if (a.kind == AgentKind::Regular) {
      for (int s : a.peak_steps) ++traffic[static_cast<std::size_t>(s)];
    }
  }
  const auto it = std::find_if(agents.begin(), agents.end(), [](const auto& a) { return a.kind == AgentKind::Influencer; });
  REQUIRE(it != agents.end());
  int lowest_chosen = 1 << 30;
  for (int s : it->peak_steps) lowest_chosen = std::min(lowest_chosen, traffic[static_cast<std::size_t>(s)]);
  for (int s = 0; s < 24; ++s) {
    if (std::find(it->peak_steps.begin(), it->peak_steps.end(), s) == it->peak_steps.end()) {
      CHECK(traffic[static_cast<std::size_t>(s)] <= lowest_chosen);
    }
  }
}

TEST_CASE("SocialGraph rejects malformed edges") {
  const std::vector<std::pair<AgentId, AgentId>> loop{{1, 1}};
  CHECK_THROWS_AS(SocialGraph(3, loop), std::invalid_argument);
  const std::vector<std::pair<AgentId, AgentId>> dup{{0, 1}, {0, 1}};
  CHECK_THROWS_AS(SocialGraph(3, dup), std::invalid_argument);
  const std::vector<std::pair<AgentId, AgentId>> range{{0, 3}};
  CHECK_THROWS_AS(SocialGraph(3, range), std::invalid_argument);
  const std::vector<std::pair<AgentId, AgentId>> ok{{2, 0}, {0, 1}, {2, 1}};
  const SocialGraph g(3, ok);
  CHECK(g.edge_count() == 3);
  CHECK(g.follows(2, 0));
  CHECK_FALSE(g.follows(0, 2));
  CHECK(std::vector<AgentId>(g.followers(1).begin(), g.followers(1).end()) == std::vector<AgentId>{0, 2});
  std::ostringstream out;
  write_edge_list(out, g);
  CHECK(out.str() == "0 1\n2 0\n2 1\n");
}

TEST_CASE("generate_graph structure") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CAPTURE(seed);
    const auto p = make_population(seed);
    CHECK(p.graph.edge_count() >= 1020);
    CHECK(p.graph.edge_count() <= 1380);
    for (AgentId u = 0; u < p.graph.size(); ++u) {
      CHECK(p.graph.followees(u).size() >= 1);
      CHECK_FALSE(p.graph.follows(u, u));
    }
    const double regular = mean_in_degree(p, AgentKind::Regular);
    CHECK(mean_in_degree(p, AgentKind::Influencer) / regular >= 10.0);
    CHECK(mean_in_degree(p, AgentKind::Bot) < regular);
    CHECK(make_population(seed).graph.edges() == p.graph.edges());
  }

  SimulationConfig two;
  two.n_users = 2;
  two.bot_pct = 0.0;
  two.influencer_pct = 0.0;
  const auto p = make_population(3, two);
  CHECK(p.graph.follows(0, 1));
  CHECK(p.graph.follows(1, 0));

  auto rng = RandomSource::stream(1, {});
  CHECK_THROWS_AS(generate_graph(std::vector<AgentProfile>(1), two, rng), std::invalid_argument);
}

TEST_CASE("follow probability rises with preference similarity") {
  // Regular -> regular pairs from many graphs. Weights are flat below cosine
  // 0.01, so positive cosines are binned and the rest pooled.
  const int bins = 12;
  std::vector<double> pairs(bins, 0.0), follows(bins, 0.0);
  double flat_pairs = 0.0, flat_follows = 0.0;
  SimulationConfig config;
  for (std::uint64_t seed = 100; seed < 110; ++seed) {
    const auto p = make_population(seed, config);
    for (const auto& u : p.agents) {
      if (u.kind != AgentKind::Regular) continue;
      for (const auto& v : p.agents) {
        if (v.kind != AgentKind::Regular || u.id == v.id) continue;
        const double c = cosine_similarity(u.preference, v.preference);
        const bool followed = p.graph.follows(u.id, v.id);
        if (c <= 0.01) {
          flat_pairs += 1;
          flat_follows += followed ? 1 : 0;
          continue;
        }
        const int b = std::min(static_cast<int>(c / 0.6 * bins), bins - 1);
        pairs[static_cast<std::size_t>(b)] += 1;
        if (followed) follows[static_cast<std::size_t>(b)] += 1;
      }
    }
  }
  std::vector<double> centers, rates;
  for (int b = 0; b < bins; ++b) {
    if (pairs[static_cast<std::size_t>(b)] < 1000) continue;
    centers.push_back(b);
    rates.push_back(follows[static_cast<std::size_t>(b)] / pairs[static_cast<std::size_t>(b)]);
  }
  REQUIRE(centers.size() >= 6);
  CHECK(spearman(centers, rates) >= 0.9);
  CHECK(rates.back() > 3 * rates.front());
  CHECK(flat_follows / flat_pairs < rates.front());
}
