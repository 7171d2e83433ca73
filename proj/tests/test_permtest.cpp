#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "doctest.h"
#include "emanet/errors.hpp"
#include "emanet/permtest.hpp"
#include "emanet/rng.hpp"
#include "emanet/synthgen.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace emanet;
using testutil::record;

namespace {

// `iso` isolation days followed by `soc` sociable days with random EMAs.
ParticipantDataset split_dataset(int iso, int soc, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<DailyRecord> recs;
  int d = 0;
  for (int i = 0; i < iso; ++i) recs.push_back(record(d++, testutil::random_ema(gen), 0));
  for (int i = 0; i < soc; ++i) recs.push_back(record(d++, testutil::random_ema(gen), 1));
  return ParticipantDataset("p", recs);
}

PermutationConfig config(std::uint64_t seed, std::size_t n = 2000) {
  PermutationConfig cfg;
  cfg.seed = seed;
  cfg.n_permutations = n;
  return cfg;
}

}  // namespace

TEST_CASE("rng helpers") {
  Rng a(1), b(1);
  for (int i = 0; i < 10; ++i) CHECK(a.next() == b.next());
  // First output of std::mt19937_64 seeded with 5489 is fixed by the standard.
  CHECK(Rng(5489).next() == 14514284786278117030ULL);
  CHECK(derive_seed(7, "locations") != derive_seed(7, "baseline"));
  CHECK(derive_seed(7, std::uint64_t{0}) != derive_seed(7, std::uint64_t{1}));

  Rng r(3);
  const auto s = sample_without_replacement(r, 30, 30);
  CHECK(std::set<std::size_t>(s.begin(), s.end()).size() == 30);
  CHECK_THROWS(sample_without_replacement(r, 3, 4));

  std::vector<int> hist(5, 0);
  for (int i = 0; i < 50000; ++i) ++hist[r.uniform_index(5)];
  for (int h : hist) CHECK(std::abs(h - 10000) < 500);

  double sum = 0, sq = 0;
  for (int i = 0; i < 100000; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / 100000) < 0.02);
  CHECK(std::abs(sq / 100000 - 1.0) < 0.02);
}

TEST_CASE("pools of exactly sample_size days are used whole every iteration") {
  const auto ds = split_dataset(25, 25, 1);
  const auto pools = categorize(ds, context_for(Feature::LocationsVisited));
  const auto run = run_context_permutation(ds, pools, config(4));
  REQUIRE(run.differences.size() == 2000);
  for (double d : run.differences) CHECK(d == doctest::Approx(run.differences[0]).epsilon(1e-12));
  CHECK(run.stats.std < 1e-12);
}

TEST_CASE("insufficient pools") {
  const auto ds = split_dataset(24, 40, 1);
  const auto pools = categorize(ds, context_for(Feature::LocationsVisited));
  try {
    run_context_permutation(ds, pools, config(1));
    FAIL("expected InsufficientPool");
  } catch (const InsufficientPool& e) {
    CHECK(e.category() == "isolation");
    CHECK(e.have() == 24);
    CHECK(e.need() == 25);
  }
  const auto pool = baseline_pool(split_dataset(20, 29, 1));
  CHECK_THROWS_AS(run_baseline_permutation(ds, pool, config(1)), InsufficientPool);

  PermutationConfig bad = config(1);
  bad.sample_size = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
  bad = config(1, 0);
  CHECK_THROWS_AS(bad.validate(), InvalidConfig);
}

TEST_CASE("exchangeable pools give a context mean near zero") {
  // Both pools hold the same multiset of EMA vectors, so isolation and
  // sociability samples are identically distributed given the data.
  std::mt19937_64 gen(99);
  std::vector<DailyRecord> recs;
  for (int i = 0; i < 120; ++i) {
    const auto e = testutil::random_ema(gen);
    recs.push_back(record(2 * i, e, 0));
    recs.push_back(record(2 * i + 1, e, 2));
  }
  const ParticipantDataset ds("p", recs);
  const auto pools = categorize(ds, context_for(Feature::LocationsVisited));
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto run = run_context_permutation(ds, pools, config(seed));
    CHECK(std::abs(run.stats.mean) <= 3 * run.stats.std / std::sqrt(2000.0));
  }
}

TEST_CASE("baseline runs") {
  const auto ds = backfill_emas(generate(null_config(5, 300)));
  const auto pool = baseline_pool(ds);

  SUBCASE("mean near zero") {
    const auto run = run_baseline_permutation(ds, pool, config(8));
    CHECK(std::abs(run.stats.mean) < 4 * run.stats.std / std::sqrt(2000.0));
  }

  SUBCASE("pool of exactly 50 days is partitioned every iteration") {
    const std::vector<DayRef> small(pool.begin(), pool.begin() + 50);
    auto cfg = config(3, 200);
    cfg.record_indices = true;
    const auto run = run_baseline_permutation(ds, small, cfg);
    std::set<double> distinct(run.differences.begin(), run.differences.end());
    CHECK(distinct.size() > 1);
    for (const auto& s : run.samples) {
      std::set<DayRef> all(s.first.begin(), s.first.end());
      all.insert(s.second.begin(), s.second.end());
      CHECK(all == std::set<DayRef>(small.begin(), small.end()));
    }
  }

  SUBCASE("swapping the split negates every difference") {
    auto cfg = config(12, 300);
    cfg.record_indices = true;
    const auto run = run_baseline_permutation(ds, pool, cfg);
    for (std::size_t i = 0; i < run.samples.size(); ++i) {
      const IterationSample swapped{run.samples[i].second, run.samples[i].first};
      CHECK(iteration_difference(ds, swapped, cfg.subset) == -run.differences[i]);
    }
  }

  SUBCASE("mean of baseline means over seeds approaches zero") {
    double total = 0;
    for (std::uint64_t s = 0; s < 20; ++s) total += run_baseline_permutation(ds, pool, config(s, 500)).stats.mean;
    const auto one = run_baseline_permutation(ds, pool, config(100, 500));
    CHECK(std::abs(total / 20) < 4 * one.stats.std / std::sqrt(20.0 * 500));
  }
}

TEST_CASE("determinism, threading and logged indices") {
  const auto ds = backfill_emas(generate(planted_config(21, 300)));
  const auto pools = categorize(ds, context_for(Feature::LocationsVisited));
  auto cfg = config(77, 400);
  const auto a = run_context_permutation(ds, pools, cfg);
  const auto b = run_context_permutation(ds, pools, cfg);
  CHECK(a.differences == b.differences);

  cfg.threads = 4;
  cfg.record_indices = true;
  const auto c = run_context_permutation(ds, pools, cfg);
  CHECK(c.differences == a.differences);
  REQUIRE(c.samples.size() == 400);
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    CHECK(c.samples[i].first.size() == 25);
    CHECK(std::set<DayRef>(c.samples[i].first.begin(), c.samples[i].first.end()).size() == 25);
    for (auto d : c.samples[i].first) CHECK(ds[d].sensors.get(Feature::LocationsVisited) == 0);
    for (auto d : c.samples[i].second) CHECK(*ds[d].sensors.get(Feature::LocationsVisited) >= 1);
    CHECK(iteration_difference(ds, c.samples[i], cfg.subset) == c.differences[i]);
  }
}

TEST_CASE("difference bounds") {
  for (auto subset : {ItemSubset::All10, ItemSubset::PositiveOnly, ItemSubset::NegativeOnly}) {
    const auto ds = backfill_emas(generate(planted_config(2, 200)));
    auto cfg = config(5, 300);
    cfg.subset = subset;
    const double k = static_cast<double>(subset_indices(subset).size());
    const auto run = run_context_permutation(ds, categorize(ds, context_for(Feature::LocationsVisited)), cfg);
    for (double d : run.differences) CHECK(std::abs(d) <= k * (k - 1));
  }
}

TEST_CASE("paired t-test examples") {
  const std::vector<double> x{1, 2, 3, 4, 5}, y{0, 1, 2, 3, 4};

  auto same = paired_t_test(x, x);
  CHECK(same.t == 0.0);
  CHECK(same.p == 1.0);
  CHECK(same.degenerate);

  auto shifted = paired_t_test(x, y);
  CHECK(std::isinf(shifted.t));
  CHECK(shifted.t > 0);
  CHECK(shifted.p == 0.0);
  CHECK(paired_t_test(y, x).t < 0);

  const std::vector<double> a{1.1, 2.0, 2.9, 4.2}, b{0.8, 1.7, 3.1, 3.9};
  const auto r = paired_t_test(a, b);
  const double t_oracle = oracle::paired_t(a, b);
  const double p_oracle = oracle::t_two_sided_quadrature(t_oracle, 3);
  // Frozen from the textbook formula and quadrature: t = 1.4, p = 0.25600732874811.
  CHECK(std::abs(t_oracle - 1.4) < 1e-12);
  CHECK(std::abs(p_oracle - 0.2560073287481138) < 1e-10);
  CHECK(std::abs(r.t - t_oracle) < 1e-10);
  CHECK(std::abs(r.p - p_oracle) < 1e-10);
  CHECK(r.df == 3);

  CHECK_THROWS_AS(paired_t_test(a, x), LengthMismatch);
  CHECK_THROWS_AS(paired_t_test(std::vector<double>{1}, std::vector<double>{2}), InsufficientData);
}

TEST_CASE("paired t-test antisymmetry and monotone p") {
  std::mt19937_64 gen(31);
  std::normal_distribution<double> n01;
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x(20), y(20);
    for (int i = 0; i < 20; ++i) {
      x[i] = n01(gen);
      y[i] = n01(gen) + 0.3;
    }
    const auto xy = paired_t_test(x, y);
    const auto yx = paired_t_test(y, x);
    CHECK(xy.t == -yx.t);
    CHECK(xy.p == yx.p);
  }
}

TEST_CASE("compare_to_baseline") {
  const auto ds = backfill_emas(generate(planted_config(4, 300)));
  const auto pools = categorize(ds, context_for(Feature::LocationsVisited));
  auto cfg = config(9);
  cfg.subset = ItemSubset::PositiveOnly;
  const auto ctx = run_context_permutation(ds, pools, cfg);

  const auto self = compare_to_baseline(ctx, ctx);
  CHECK(self.test.t == 0.0);
  CHECK(self.test.p == 1.0);

  const auto base = run_baseline_permutation(ds, baseline_pool(ds), cfg);
  const auto cmp = compare_to_baseline(ctx, base);
  CHECK(cmp.context.mean > cmp.baseline.mean);
  CHECK(cmp.test.t < 0);  // baseline minus context
  CHECK(cmp.test.p < 0.001);
  CHECK(cmp.test.df == 1999);

  auto other = cfg;
  other.n_permutations = 100;
  CHECK_THROWS_AS(compare_to_baseline(ctx, run_baseline_permutation(ds, baseline_pool(ds), other)),
                  ConfigMismatch);
  other = cfg;
  other.subset = ItemSubset::All10;
  CHECK_THROWS_AS(compare_to_baseline(ctx, run_baseline_permutation(ds, baseline_pool(ds), other)),
                  ConfigMismatch);
}
