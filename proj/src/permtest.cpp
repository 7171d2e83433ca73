#include "emanet/permtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "emanet/errors.hpp"
#include "emanet/rng.hpp"
#include "emanet/stats.hpp"

namespace emanet {

void PermutationConfig::validate() const {
  if (n_permutations < 1) throw InvalidConfig("n_permutations must be >= 1");
  if (sample_size < 2) throw InvalidConfig("sample_size must be >= 2");
}

std::uint64_t context_run_seed(std::uint64_t master_seed, const ContextSpec& ctx) {
  return derive_seed(master_seed, context_flag(ctx));
}

DistributionStats describe(std::span<const double> xs) {
  return {stats::mean(xs), stats::sample_std(xs)};
}

namespace {

double sample_connectivity(const ParticipantDataset& ds, std::span<const DayRef> days,
                           ItemSubset subset) {
  return upper_triangle_sum(correlation_matrix(sample_matrix(ds, days, subset)));
}

std::vector<DayRef> pick(std::span<const DayRef> pool, std::span<const std::size_t> positions) {
  std::vector<DayRef> out;
  out.reserve(positions.size());
  for (auto p : positions) out.push_back(pool[p]);
  return out;
}

// Runs body(i) for i in [0, n), split into contiguous chunks across threads.
template <typename Body>
void for_each_iteration(std::size_t n, unsigned threads, Body&& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::jthread> workers;
  const std::size_t chunk = (n + threads - 1) / threads;
  for (unsigned t = 0; t < threads; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([begin, end, &body] {
      for (std::size_t i = begin; i < end; ++i) body(i);
    });
  }
}

PermutationRun finish(PermutationRun run) {
  run.stats = describe(run.differences);
  return run;
}

}  // namespace

double iteration_difference(const ParticipantDataset& ds, const IterationSample& sample,
                            ItemSubset subset) {
  return sample_connectivity(ds, sample.first, subset) -
         sample_connectivity(ds, sample.second, subset);
}

PermutationRun run_context_permutation(const ParticipantDataset& ds, const CategoryPools& pools,
                                       const PermutationConfig& cfg) {
  cfg.validate();
  const auto& iso = pools.isolation_days;
  const auto& soc = pools.sociability_days;
  if (iso.size() < cfg.sample_size) {
    throw InsufficientPool(std::string(to_string(Category::Isolation)), iso.size(), cfg.sample_size);
  }
  if (soc.size() < cfg.sample_size) {
    throw InsufficientPool(std::string(to_string(Category::Sociability)), soc.size(), cfg.sample_size);
  }

  PermutationRun run{pools.context, cfg, std::vector<double>(cfg.n_permutations), {}, {}};
  if (cfg.record_indices) run.samples.resize(cfg.n_permutations);

  for_each_iteration(cfg.n_permutations, cfg.threads, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    IterationSample s;
    s.first = pick(iso, sample_without_replacement(rng, iso.size(), cfg.sample_size));
    s.second = pick(soc, sample_without_replacement(rng, soc.size(), cfg.sample_size));
    run.differences[i] = iteration_difference(ds, s, cfg.subset);
    if (cfg.record_indices) run.samples[i] = std::move(s);
  });
  return finish(std::move(run));
}

PermutationRun run_baseline_permutation(const ParticipantDataset& ds, std::span<const DayRef> pool,
                                        const PermutationConfig& cfg) {
  cfg.validate();
  const std::size_t need = 2 * cfg.sample_size;
  if (pool.size() < need) throw InsufficientPool("baseline", pool.size(), need);

  PermutationRun run{baseline_context(), cfg, std::vector<double>(cfg.n_permutations), {}, {}};
  if (cfg.record_indices) run.samples.resize(cfg.n_permutations);

  for_each_iteration(cfg.n_permutations, cfg.threads, [&](std::size_t i) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    const auto drawn = pick(pool, sample_without_replacement(rng, pool.size(), need));
    IterationSample s;
    const auto half = drawn.begin() + static_cast<std::ptrdiff_t>(cfg.sample_size);
    s.first.assign(drawn.begin(), half);
    s.second.assign(half, drawn.end());
    run.differences[i] = iteration_difference(ds, s, cfg.subset);
    if (cfg.record_indices) run.samples[i] = std::move(s);
  });
  return finish(std::move(run));
}

TTestResult paired_t_test(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw LengthMismatch("paired_t_test: samples differ in length");
  if (xs.size() < 2) throw InsufficientData("paired_t_test: need at least 2 pairs");

  std::vector<double> d(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) d[i] = xs[i] - ys[i];

  TTestResult r;
  r.df = d.size() - 1;
  r.mean_difference = stats::mean(d);
  r.sd_difference = stats::sample_std(d);
  if (r.sd_difference == 0.0) {
    if (r.mean_difference == 0.0) {
      r.degenerate = true;
      r.t = 0.0;
      r.p = 1.0;
    } else {
      r.t = std::copysign(std::numeric_limits<double>::infinity(), r.mean_difference);
      r.p = 0.0;
    }
    return r;
  }
  r.t = r.mean_difference / (r.sd_difference / std::sqrt(static_cast<double>(d.size())));
  r.p = stats::t_sf(r.t, static_cast<double>(r.df)).value;
  return r;
}

Comparison compare_to_baseline(const PermutationRun& context_run, const PermutationRun& baseline_run) {
  const auto& a = context_run.config;
  const auto& b = baseline_run.config;
  if (a.n_permutations != b.n_permutations || a.sample_size != b.sample_size ||
      a.subset != b.subset || context_run.differences.size() != baseline_run.differences.size()) {
    throw ConfigMismatch("compare_to_baseline: runs differ in permutations, sample size or subset");
  }
  return Comparison{baseline_run.stats, context_run.stats,
                    paired_t_test(baseline_run.differences, context_run.differences)};
}

}  // namespace emanet
