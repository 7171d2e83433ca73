#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emanet/contexts.hpp"
#include "emanet/ingest.hpp"

namespace emanet {

enum class ItemSubset : std::uint8_t { All10, PositiveOnly, NegativeOnly };

// Indices into EmaVector order: 0-9, 0-4 or 5-9.
std::vector<std::size_t> subset_indices(ItemSubset subset);
ItemSubset parse_subset_flag(std::string_view flag);  // all|positive|negative
std::string_view subset_flag(ItemSubset subset);
std::string_view subset_title(ItemSubset subset);     // "All EMAs", ...

// ---------------------------------------------------------------------------
// Dense kernels. Rows of `samples` are observations, columns are variables.

/// Pearson correlation matrix of the columns of `samples`. A column with zero
/// variance (all values equal) correlates 0 with everything else; the
/// diagonal is exactly 1.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
correlation_matrix(const Eigen::MatrixBase<Derived>& samples) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index k = samples.cols();
  const Matrix centered = samples.rowwise() - samples.colwise().mean();
  const Matrix cross = centered.transpose() * centered;

  Eigen::Array<bool, Eigen::Dynamic, 1> constant(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    constant(j) = samples.col(j).maxCoeff() == samples.col(j).minCoeff();
  }

  Matrix r = Matrix::Identity(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      Scalar v(0);
      if (!constant(i) && !constant(j)) {
        v = cross(i, j) / std::sqrt(cross(i, i) * cross(j, j));
        v = std::clamp(v, Scalar(-1), Scalar(1));
      }
      r(i, j) = r(j, i) = v;
    }
  }
  return r;
}

// Sum of the strictly upper triangle: each unordered pair once.
template <typename Derived>
typename Derived::Scalar upper_triangle_sum(const Eigen::MatrixBase<Derived>& m) {
  typename Derived::Scalar total(0);
  for (Eigen::Index j = 1; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) total += m(i, j);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Networks

struct CorrelationNetwork {
  std::vector<std::string> items;  // 3-letter item codes
  Eigen::MatrixXd matrix;
  std::size_t n_samples = 0;

  std::size_t size() const { return items.size(); }
  friend bool operator==(const CorrelationNetwork& a, const CorrelationNetwork& b) {
    return a.items == b.items && a.n_samples == b.n_samples && a.matrix == b.matrix;
  }
};

std::vector<std::string> subset_codes(ItemSubset subset);

// Observations x items matrix of Likert scores.
Eigen::MatrixXd sample_matrix(std::span<const EmaVector> days, ItemSubset subset);
Eigen::MatrixXd sample_matrix(const ParticipantDataset& ds, std::span<const DayRef> days,
                              ItemSubset subset);

// Throws InsufficientData when fewer than 2 days are supplied.
CorrelationNetwork pearson_network(std::span<const EmaVector> days, ItemSubset subset);
CorrelationNetwork pearson_network(const ParticipantDataset& ds, std::span<const DayRef> days,
                                   ItemSubset subset);

double connectivity(const CorrelationNetwork& net);

// connectivity(a) - connectivity(b). Throws SubsetMismatch when the item
// lists differ.
double connectivity_difference(const CorrelationNetwork& a, const CorrelationNetwork& b);

// ---------------------------------------------------------------------------
// Export

inline constexpr double kDefaultEdgeThreshold = 0.1;

enum class NetworkFormat { Json, Dot };

void export_network(std::ostream& out, const CorrelationNetwork& net, NetworkFormat format,
                    double edge_threshold = kDefaultEdgeThreshold);
std::string export_network(const CorrelationNetwork& net, NetworkFormat format,
                           double edge_threshold = kDefaultEdgeThreshold);

// Parses the JSON network schema. Throws InvalidConfig on malformed input.
CorrelationNetwork parse_network_json(std::string_view text);

}  // namespace emanet
