#pragma once

#include <span>

namespace emanet::stats {

// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double value);
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

double sum(std::span<const double> xs);

// Arithmetic mean; 0 for an empty input.
double mean(std::span<const double> xs);

// Sample standard deviation (n - 1 denominator), two-pass with compensated
// reductions. Returns 0 when fewer than two values are given.
double sample_std(std::span<const double> xs);

// Product-moment correlation. Zero variance in either input yields 0.
// Throws LengthMismatch when sizes differ, InsufficientData below 2 values.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Regularized incomplete beta I_x(a, b), evaluated with the modified Lentz
/// continued fraction. The fraction is applied directly when
/// x < (a + 1) / (a + b + 2) and through the reflection
/// I_x(a, b) = 1 - I_{1-x}(b, a) otherwise.
double incomplete_beta(double x, double a, double b);

inline constexpr int kBetaMaxIterations = 10000;
inline constexpr double kBetaEpsilon = 1e-16;

struct TailProbability {
  double value = 1.0;
};

/// Two-sided Student-t tail probability P(|T| >= |t|) with `df` degrees of
/// freedom, computed as I_{df/(df+t^2)}(df/2, 1/2). Infinite |t| gives 0.
TailProbability t_sf(double t, double df);

}  // namespace emanet::stats
