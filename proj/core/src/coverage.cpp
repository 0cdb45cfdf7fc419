#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "mtbounds/errors.hpp"
#include "mtbounds/inference.hpp"
#include "mtbounds/simlab.hpp"
#include "mtbounds/stats.hpp"

namespace mtbounds {

double CoverageReport::mc_se() const {
  if (replicates == 0) return 0.0;
  const double p = coverage();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(replicates));
}

CoverageReport coverage_study(const Scenario& sc, const CoverageSpec& spec) {
  sc.check();
  if (!sc.mar_holds) {
    throw ConfigError("coverage_study needs a scenario with mar_holds=true");
  }
  if (spec.replicates < 1) throw ConfigError("coverage_study: replicates must be >= 1");
  if (spec.sample_size == 0) throw ConfigError("coverage_study: empty sample");

  const double true_pi = population_prevalence(sc, spec.target_index);
  const Classification cls = sc.classification();

  const int replicates = spec.replicates;
  std::vector<signed char> covered(static_cast<std::size_t>(replicates), -1);
  std::vector<double> widths(static_cast<std::size_t>(replicates), 0.0);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (;;) {
      const int rep = next.fetch_add(1);
      if (rep >= replicates) return;
      const std::uint64_t rep_seed =
          splitmix64(spec.seed ^ splitmix64(static_cast<std::uint64_t>(rep) + 0x51ab1ed));
      try {
        const Panel panel = generate(sc, spec.sample_size, rep_seed);
        const IndicatorPanel ip = classify(panel, cls);
        const TermEstimates terms =
            bootstrap_terms(ip, {spec.target_index, spec.past, spec.future}, spec.bootstrap,
                            splitmix64(rep_seed));
        const IntervalResult ci = ci_construct(terms, spec.alpha);
        const bool hit = ci.lower_end <= true_pi && true_pi <= ci.upper_end;
        covered[static_cast<std::size_t>(rep)] = hit ? 1 : 0;
        widths[static_cast<std::size_t>(rep)] = ci.upper_end - ci.lower_end;
      } catch (const std::exception&) {
        covered[static_cast<std::size_t>(rep)] = -2;  // replicate failed outright
      }
    }
  };

  unsigned thread_count = spec.threads > 0 ? static_cast<unsigned>(spec.threads)
                                           : std::thread::hardware_concurrency();
  if (thread_count == 0) thread_count = 1;
  thread_count = std::min<unsigned>(thread_count, static_cast<unsigned>(replicates));
  std::vector<std::thread> pool;
  pool.reserve(thread_count);
  for (unsigned i = 0; i < thread_count; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  CoverageReport report;
  report.replicates = replicates;
  report.true_pi = true_pi;
  report.alpha = spec.alpha;
  double width_sum = 0.0;
  for (int rep = 0; rep < replicates; ++rep) {
    const auto idx = static_cast<std::size_t>(rep);
    if (covered[idx] == 1) {
      ++report.covered;
      width_sum += widths[idx];
    } else if (covered[idx] == -2) {
      ++report.failed;
    }
  }
  report.mean_width = report.covered > 0 ? width_sum / report.covered : 0.0;
  return report;
}

}  // namespace mtbounds
