#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emanet/contexts.hpp"
#include "emanet/ingest.hpp"
#include "emanet/netcore.hpp"

namespace emanet {

inline constexpr std::size_t kDefaultPermutations = 2000;
inline constexpr std::size_t kDefaultSampleSize = 25;

struct PermutationConfig {
  std::size_t n_permutations = kDefaultPermutations;
  std::size_t sample_size = kDefaultSampleSize;
  ItemSubset subset = ItemSubset::All10;
  // Run seed; iteration i draws from Rng(derive_seed(seed, i)).
  std::uint64_t seed = 0;
  // Worker threads for the iteration loop; 0 picks hardware concurrency.
  // Output does not depend on this value.
  unsigned threads = 1;
  // Keep the sampled day references of every iteration.
  bool record_indices = false;

  // Throws InvalidConfig unless n_permutations >= 1 and sample_size >= 2.
  void validate() const;
};

// Run seed for one context, split from the master seed by the context flag.
std::uint64_t context_run_seed(std::uint64_t master_seed, const ContextSpec& ctx);

struct DistributionStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n - 1)
};

DistributionStats describe(std::span<const double> xs);

// Day references drawn in one iteration. For context runs `first` is the
// isolation sample and `second` the sociability sample; for baseline runs
// they are the two halves of the combined draw.
struct IterationSample {
  std::vector<DayRef> first;
  std::vector<DayRef> second;
};

struct PermutationRun {
  ContextSpec context;
  PermutationConfig config;
  std::vector<double> differences;
  DistributionStats stats;
  std::vector<IterationSample> samples;  // filled when config.record_indices
};

/// For every iteration draws `sample_size` days without replacement from the
/// isolation pool and, independently, from the sociability pool, and records
/// connectivity(isolation) - connectivity(sociability).
/// Throws InsufficientPool when either pool is smaller than `sample_size`.
PermutationRun run_context_permutation(const ParticipantDataset& ds, const CategoryPools& pools,
                                       const PermutationConfig& cfg);

/// For every iteration draws 2 * sample_size days without replacement from the
/// unfiltered pool, splits the draw in half and records
/// connectivity(first half) - connectivity(second half).
PermutationRun run_baseline_permutation(const ParticipantDataset& ds, std::span<const DayRef> pool,
                                        const PermutationConfig& cfg);

// Connectivity difference for one recorded iteration.
double iteration_difference(const ParticipantDataset& ds, const IterationSample& sample,
                            ItemSubset subset);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  std::size_t df = 0;
  double mean_difference = 0.0;
  double sd_difference = 0.0;
  // s_d == 0 and mean difference == 0: reported as t = 0, p = 1.
  bool degenerate = false;
};

/// Paired-sample t-test on d_i = xs_i - ys_i with df = n - 1 and a two-sided
/// p-value. A zero spread with a nonzero mean gives t = +/-inf, p = 0.
/// Throws LengthMismatch for unequal lengths, InsufficientData below 2 pairs.
TTestResult paired_t_test(std::span<const double> xs, std::span<const double> ys);

struct Comparison {
  DistributionStats baseline;
  DistributionStats context;
  TTestResult test;
};

// paired_t_test(baseline differences, context differences), so a context mean
// above the baseline mean gives a negative t. Throws ConfigMismatch when the
// runs differ in permutation count, sample size or item subset.
Comparison compare_to_baseline(const PermutationRun& context_run, const PermutationRun& baseline_run);

}  // namespace emanet
