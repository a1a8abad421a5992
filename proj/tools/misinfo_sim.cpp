#include <chrono>
#include <iostream>

#include "misinfo/cli.hpp"
#include "misinfo/experiment.hpp"

int main(int argc, char** argv) {
  using namespace misinfo;
  BatchPlan plan;
  try {
    plan = parse_cli(argc, argv);
  } catch (const CliExit& e) {
    (e.code() == 0 ? std::cout : std::cerr) << e.what() << '\n';
    return e.code();
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    const BatchResult result = run_batch(plan);
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;

    std::cout << "algorithm       mean_msp   mean_mrd    mean_mc  ranks(msp/mrd/mc)\n";
    for (std::size_t i = 0; i < result.per_algorithm.size(); ++i) {
      const auto& s = result.per_algorithm[i];
      const auto& r = result.ranks[i];
      std::cout << to_string(s.algorithm);
      for (std::size_t pad = to_string(s.algorithm).size(); pad < 14; ++pad) std::cout << ' ';
      std::cout << ' ' << format_real(s.mean_msp) << ' ' << format_real(s.mean_mrd) << ' ' << format_real(s.mean_mc)
                << "  " << r.msp << '/' << r.mrd << '/' << r.mc << '\n';
    }
    std::cout << result.runs.size() << " runs written to " << plan.out_dir.string() << " in " << elapsed.count()
              << " s\n";
  } catch (const BatchError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
