#include "misinfo/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "misinfo/engine.hpp"
#include "misinfo/netgen.hpp"

namespace misinfo {

std::uint64_t derive_run_seed(std::uint64_t base_seed, Algorithm algorithm, int iteration) {
  return hash_combine(base_seed, {0x52554E53454544ULL, static_cast<std::uint64_t>(algorithm),
                                  static_cast<std::uint64_t>(iteration)});
}

std::string format_real(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, 6);
  std::string s(buf, res.ptr);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

std::string run_id(Algorithm algorithm, int iteration) {
  return std::string(to_string(algorithm)) + "_" + std::to_string(iteration);
}

void write_run_csv(std::ostream& out, const RunRecord& run) {
  const std::string id = run_id(run.algorithm, run.iteration);
  const std::string_view alg = to_string(run.algorithm);
  out << kRunCsvHeader << '\n';
  for (const auto& r : run.rows) {
    out << id << ',' << alg << ',' << run.iteration << ',' << r.step << ',' << r.n_susceptible << ','
        << r.n_exposed << ',' << r.n_infected << ',' << format_real(r.msp) << ',' << format_real(r.mrd) << ','
        << format_real(r.mc) << ',' << r.n_contents << ',' << r.n_fake_contents << ',' << r.n_interactions_step
        << '\n';
  }
}

void write_summary_csv(std::ostream& out, const BatchResult& result) {
  out << kSummaryCsvHeader << '\n';
  for (const auto& run : result.runs) {
    const auto& s = run.summary;
    out << to_string(s.algorithm) << ',' << s.iteration << ',' << format_real(s.mean_msp) << ','
        << format_real(s.mean_mrd) << ',' << format_real(s.mean_mc) << '\n';
  }
  for (const auto& s : result.per_algorithm) {
    out << to_string(s.algorithm) << ",ALL," << format_real(s.mean_msp) << ',' << format_real(s.mean_mrd) << ','
        << format_real(s.mean_mc) << '\n';
  }
  for (const auto& r : result.ranks) {
    out << to_string(r.algorithm) << ",RANK," << r.msp << ',' << r.mrd << ',' << r.mc << '\n';
  }
}

BatchResult execute_plan(const BatchPlan& plan) {
  if (const auto errors = validate_config(plan.base); !errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw BatchError(msg);
  }
  if (plan.iterations < 1) throw BatchError("iterations must be positive");
  if (plan.algorithms.empty()) throw BatchError("no algorithms selected");

  BatchResult result;
  for (Algorithm a : plan.algorithms) {
    for (int it = 1; it <= plan.iterations; ++it) {
      RunRecord r;
      r.algorithm = a;
      r.iteration = it;
      r.seed = derive_run_seed(plan.base.rng_seed, a, it);
      result.runs.push_back(std::move(r));
    }
  }

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t jobs = std::min<std::size_t>(plan.jobs > 0 ? static_cast<std::size_t>(plan.jobs) : hw,
                                                 result.runs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < result.runs.size(); i = next++) {
      try {
        RunRecord& r = result.runs[i];
        SimulationConfig config = plan.base;
        config.algorithm = r.algorithm;
        config.rng_seed = r.seed;
        r.rows = run(config).rows;
        r.summary = summarize(r.rows, r.algorithm, r.iteration);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (Algorithm a : plan.algorithms) {
    std::vector<RunSummary> mine;
    for (const auto& r : result.runs) {
      if (r.algorithm == a) mine.push_back(r.summary);
    }
    result.per_algorithm.push_back(average(mine));
  }
  result.ranks = rank_algorithms(result.per_algorithm);
  return result;
}

namespace {

void ensure_writable(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw BatchError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
  }
  const auto probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f || !(f << "ok") || !f.flush()) throw BatchError("output directory is not writable: " + dir.string());
  }
  std::filesystem::remove(probe, ec);
}

void write_file(const std::filesystem::path& path, const auto& writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw BatchError("cannot open " + path.string());
  writer(f);
  f.flush();
  if (!f) throw BatchError("failed writing " + path.string());
}

}  // namespace

BatchResult run_batch(const BatchPlan& plan) {
  if (const auto errors = validate_config(plan.base); !errors.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw BatchError(msg);
  }
  ensure_writable(plan.out_dir);

  BatchResult result = execute_plan(plan);
  for (const auto& run : result.runs) {
    write_file(plan.out_dir / ("run_" + run_id(run.algorithm, run.iteration) + ".csv"),
               [&](std::ostream& out) { write_run_csv(out, run); });
  }
  write_file(plan.out_dir / "summary.csv", [&](std::ostream& out) { write_summary_csv(out, result); });

  if (plan.export_graph && !result.runs.empty()) {
    SimulationConfig config = plan.base;
    config.algorithm = result.runs.front().algorithm;
    config.rng_seed = result.runs.front().seed;
    config.timesteps = 0;
    const SimulationModel model(config);
    write_file(*plan.export_graph, [&](std::ostream& out) { write_edge_list(out, model.graph()); });
  }
  return result;
}

// ------------------------------------------------------------ settings

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), out);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw std::invalid_argument("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
  }
  return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("invalid value for " + std::string(key) + ": '" + std::string(value) + "'");
}

std::vector<Algorithm> parse_algorithm_list(std::string_view value) {
  if (value == "all") return {kAllAlgorithms.begin(), kAllAlgorithms.end()};
  std::vector<Algorithm> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const auto name = trim(value.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    const auto a = parse_algorithm(name);
    if (!a) throw std::invalid_argument("unknown algorithm: '" + std::string(name) + "'");
    if (std::find(out.begin(), out.end(), *a) == out.end()) out.push_back(*a);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

bool apply_kind_setting(KindParams& p, std::string_view field, std::string_view key, std::string_view value) {
  double* target = nullptr;
  if (field == "activity_lo") target = &p.activity_lo;
  else if (field == "activity_hi") target = &p.activity_hi;
  else if (field == "naivety_lo") target = &p.naivety_lo;
  else if (field == "naivety_hi") target = &p.naivety_hi;
  else if (field == "post_prob") target = &p.post_prob;
  else if (field == "post_misinfo_prob") target = &p.post_misinfo_prob;
  else if (field == "follow_boost") target = &p.follow_boost;
  else if (field == "fake_share_factor") target = &p.fake_share_factor;
  if (!target) return false;
  *target = parse_number<double>(key, value);
  return true;
}

}  // namespace

void apply_setting(BatchPlan& plan, std::string_view key, std::string_view value) {
  SimulationConfig& c = plan.base;
  auto as_int = [&] { return parse_number<int>(key, value); };
  auto as_real = [&] { return parse_number<double>(key, value); };

  if (key == "timesteps" || key == "steps") c.timesteps = as_int();
  else if (key == "n_users" || key == "users") c.n_users = as_int();
  else if (key == "avg_followers") c.avg_followers = as_real();
  else if (key == "initial_news") c.initial_news = as_int();
  else if (key == "misinfo_pct") c.misinfo_pct = as_real();
  else if (key == "bot_pct") c.bot_pct = as_real();
  else if (key == "influencer_pct") c.influencer_pct = as_real();
  else if (key == "recs_per_step") c.recs_per_step = as_int();
  else if (key == "topic_dim") c.topic_dim = as_int();
  else if (key == "feed_cap") c.feed_cap = as_int();
  else if (key == "steps_per_day") c.steps_per_day = as_int();
  else if (key == "infection_recovery_window") c.infection_recovery_window = as_int();
  else if (key == "knn_neighbors") c.knn_neighbors = as_int();
  else if (key == "popularity_window") c.popularity_window = as_int();
  else if (key == "cold_start_min_interactions") c.cold_start_min_interactions = as_int();
  else if (key == "engagement_decay") c.engagement_decay = as_real();
  else if (key == "engagement_bump") c.engagement_bump = as_real();
  else if (key == "authored_topic_noise") c.authored_topic_noise = as_real();
  else if (key == "influencer_peak_count") c.influencer_peak_count = as_int();
  else if (key == "scan_new_only") c.scan_new_only = parse_bool(key, value);
  else if (key == "seed" || key == "rng_seed") c.rng_seed = parse_number<std::uint64_t>(key, value);
  else if (key == "algorithm") plan.algorithms = parse_algorithm_list(value);
  else if (key == "iterations") plan.iterations = as_int();
  else if (key == "jobs") plan.jobs = as_int();
  else if (key == "out") plan.out_dir = std::string(value);
  else {
    const auto dot = key.find('.');
    if (dot != std::string_view::npos) {
      if (const auto kind = parse_agent_kind(key.substr(0, dot))) {
        if (apply_kind_setting(c.params(*kind), key.substr(dot + 1), key, value)) return;
      }
    }
    throw std::invalid_argument("unknown setting: " + std::string(key));
  }
}

void apply_config_file(BatchPlan& plan, std::istream& in) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      apply_setting(plan, trim(view.substr(0, eq)), trim(view.substr(eq + 1)));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
}

}  // namespace misinfo
