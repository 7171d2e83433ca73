#include "emanet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <limits>

#include "emanet/errors.hpp"

namespace emanet::stats {

void CompensatedSum::add(double value) {
  const double t = sum_ + value;
  if (std::abs(sum_) >= std::abs(value)) {
    compensation_ += (sum_ - t) + value;
  } else {
    compensation_ += (value - t) + sum_;
  }
  sum_ = t;
}

double sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

double mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return sum(xs) / static_cast<double>(xs.size());
}

double sample_std(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  CompensatedSum squares;
  CompensatedSum residual;
  for (double x : xs) {
    const double d = x - m;
    squares.add(d * d);
    residual.add(d);
  }
  // Corrected two-pass: subtract the residual of the rounded mean.
  const double n = static_cast<double>(xs.size());
  const double r = residual.value();
  const double ss = squares.value() - r * r / n;
  return ss > 0.0 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw LengthMismatch("pearson_r: inputs differ in length");
  }
  if (x.size() < 2) {
    throw InsufficientData("pearson_r: need at least 2 observations");
  }
  const double mx = mean(x);
  const double my = mean(y);
  CompensatedSum sxx, syy, sxy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx.add(dx * dx);
    syy.add(dy * dy);
    sxy.add(dx * dy);
  }
  if (sxx.value() <= 0.0 || syy.value() <= 0.0) return 0.0;
  const double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
  return std::clamp(r, -1.0, 1.0);
}

namespace {

double beta_continued_fraction(double x, double a, double b) {
  constexpr double tiny = std::numeric_limits<double>::min() / kBetaEpsilon;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) <= kBetaEpsilon) break;
  }
  return h;
}

}  // namespace

double incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("incomplete_beta: shape parameters must be > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(x, a, b) / a;
  }
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

TailProbability t_sf(double t, double df) {
  if (!(df >= 1.0)) {
    throw std::domain_error("t_sf: degrees of freedom must be >= 1");
  }
  if (std::isnan(t)) return {std::numeric_limits<double>::quiet_NaN()};
  if (std::isinf(t)) return {0.0};
  if (t == 0.0) return {1.0};
  // df / (df + t^2) loses precision for small |t|; use the complementary
  // argument t^2 / (df + t^2) in that regime.
  const double t2 = t * t;
  const double x = df / (df + t2);
  double p;
  if (x > 0.5) {
    p = 1.0 - incomplete_beta(t2 / (df + t2), 0.5, 0.5 * df);
  } else {
    p = incomplete_beta(x, 0.5 * df, 0.5);
  }
  return {std::clamp(p, 0.0, 1.0)};
}

}  // namespace emanet::stats
