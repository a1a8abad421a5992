#include "misinfo/cli.hpp"

#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

namespace misinfo {

BatchPlan parse_cli(int argc, const char* const* argv) {
  CLI::App app{"Agent-based simulation of misinformation spread under five recommendation algorithms",
               "misinfo-sim"};

  std::string algorithm = "all";
  std::optional<int> steps, users, initial_news, recs, iterations, jobs;
  std::optional<double> avg_followers, misinfo_pct, bot_pct, influencer_pct;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out, config, export_graph;

  auto* alg_opt = app.add_option("--algorithm", algorithm,
                                 "random|popularity|user_knn|item_knn|content_based|all (comma-separated allowed)");
  app.add_option("--steps", steps, "Timesteps per run (600)");
  app.add_option("--users", users, "Number of agents (200)");
  app.add_option("--avg-followers", avg_followers, "Mean followees per agent (6)");
  app.add_option("--initial-news", initial_news, "Initial content pool size (400)");
  app.add_option("--misinfo-pct", misinfo_pct, "Fake fraction of the initial pool (0.10)");
  app.add_option("--bot-pct", bot_pct, "Bot fraction (0.07)");
  app.add_option("--influencer-pct", influencer_pct, "Influencer fraction (0.03)");
  app.add_option("--recs-per-step", recs, "Recommendations per active agent per step (10)");
  app.add_option("--iterations", iterations, "Runs per algorithm (5)");
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--out", out, "Output directory (results)");
  app.add_option("--config", config, "key=value settings file; flags override it");
  app.add_option("--jobs", jobs, "Concurrent runs (default: hardware threads)");
  app.add_option("--export-graph", export_graph, "Write the first run's follow graph as an edge list");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw CliExit(0, app.help());
  } catch (const CLI::ParseError& e) {
    throw CliExit(2, std::string(e.what()) + "\n" + app.help());
  }

  BatchPlan plan;
  try {
    if (config) {
      std::ifstream in(*config);
      if (!in) throw std::invalid_argument("cannot read config file " + *config);
      apply_config_file(plan, in);
    }
    if (alg_opt->count() > 0) apply_setting(plan, "algorithm", algorithm);
  } catch (const std::invalid_argument& e) {
    throw CliExit(2, e.what());
  }
  SimulationConfig& c = plan.base;
  if (steps) c.timesteps = *steps;
  if (users) c.n_users = *users;
  if (avg_followers) c.avg_followers = *avg_followers;
  if (initial_news) c.initial_news = *initial_news;
  if (misinfo_pct) c.misinfo_pct = *misinfo_pct;
  if (bot_pct) c.bot_pct = *bot_pct;
  if (influencer_pct) c.influencer_pct = *influencer_pct;
  if (recs) c.recs_per_step = *recs;
  if (seed) c.rng_seed = *seed;
  if (iterations) plan.iterations = *iterations;
  if (jobs) plan.jobs = *jobs;
  if (out) plan.out_dir = *out;
  if (export_graph) plan.export_graph = *export_graph;

  auto errors = validate_config(c);
  if (plan.iterations < 1) errors.push_back("iterations must be positive");
  if (plan.jobs < 0) errors.push_back("jobs must be nonnegative");
  if (!errors.empty()) {
    std::ostringstream msg;
    msg << "invalid configuration:";
    for (const auto& e : errors) msg << "\n  " << e;
    throw CliExit(2, msg.str());
  }
  return plan;
}

}  // namespace misinfo
