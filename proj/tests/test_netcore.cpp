#include <algorithm>
#include <random>
#include <sstream>

#include "doctest.h"
#include "emanet/errors.hpp"
#include "emanet/netcore.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace emanet;

namespace {

// Four days whose first five items follow the given columns; the rest are 0.
std::vector<EmaVector> days_from_columns(const std::vector<std::array<int, 4>>& cols) {
  std::vector<EmaVector> out;
  for (int d = 0; d < 4; ++d) {
    std::array<int, 10> s{};
    for (std::size_t c = 0; c < cols.size(); ++c) s[c] = cols[c][static_cast<std::size_t>(d)];
    out.emplace_back(s);
  }
  return out;
}

CorrelationNetwork filled_network(ItemSubset subset, double off) {
  CorrelationNetwork net;
  net.items = subset_codes(subset);
  const auto k = static_cast<Eigen::Index>(net.items.size());
  net.matrix = Eigen::MatrixXd::Constant(k, k, off);
  net.matrix.diagonal().setOnes();
  net.n_samples = 25;
  return net;
}

}  // namespace

TEST_CASE("item subsets") {
  CHECK(subset_indices(ItemSubset::All10).size() == 10);
  CHECK(subset_indices(ItemSubset::PositiveOnly) == std::vector<std::size_t>{0, 1, 2, 3, 4});
  CHECK(subset_indices(ItemSubset::NegativeOnly) == std::vector<std::size_t>{5, 6, 7, 8, 9});
  CHECK(parse_subset_flag("negative") == ItemSubset::NegativeOnly);
  CHECK_THROWS(parse_subset_flag("mixed"));
}

TEST_CASE("pearson_network examples") {
  const auto days = days_from_columns({{0, 1, 2, 3}, {0, 1, 2, 3}, {3, 2, 1, 0}, {0, 3, 0, 3}, {0, 0, 3, 3}});
  const auto net = pearson_network(days, ItemSubset::PositiveOnly);
  CHECK(net.n_samples == 4);
  CHECK(net.items == std::vector<std::string>{"CAL", "SOC", "SLE", "THI", "HOP"});
  CHECK(net.matrix(0, 1) == doctest::Approx(1.0).epsilon(1e-15));

  // Brute-force formula for the two derived pairs.
  const std::vector<double> a{0, 1, 2, 3}, b{3, 2, 1, 0}, c{0, 3, 0, 3}, d{0, 0, 3, 3};
  CHECK(oracle::pearson(a, b) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(oracle::pearson(c, d)) < 1e-15);
  CHECK(std::abs(net.matrix(0, 2) - oracle::pearson(a, b)) < 1e-12);
  CHECK(std::abs(net.matrix(3, 4) - oracle::pearson(c, d)) < 1e-12);

  // Items 5-9 are constant 0 in this sample.
  const auto all = pearson_network(days, ItemSubset::All10);
  CHECK(all.matrix(0, 7) == 0.0);
  CHECK(all.matrix(7, 7) == 1.0);

  CHECK_THROWS_AS(pearson_network(std::vector<EmaVector>{days[0]}, ItemSubset::All10), InsufficientData);
}

TEST_CASE("constant item correlates 0") {
  const auto days = days_from_columns({{2, 2, 2, 2}, {0, 1, 3, 2}});
  const auto net = pearson_network(days, ItemSubset::PositiveOnly);
  CHECK(net.matrix(0, 1) == 0.0);
  CHECK(net.matrix(0, 0) == 1.0);
}

TEST_CASE("connectivity examples") {
  CHECK(connectivity(filled_network(ItemSubset::All10, 0.0)) == 0.0);
  CHECK(connectivity(filled_network(ItemSubset::All10, 1.0)) == 45.0);

  // Five-item network from the derived columns: upper-triangle sum against
  // (full sum - trace) / 2.
  const auto days = days_from_columns({{0, 1, 2, 3}, {3, 2, 1, 0}, {0, 3, 0, 3}, {0, 0, 3, 3}, {1, 2, 2, 3}});
  const auto net = pearson_network(days, ItemSubset::PositiveOnly);
  const double upper = connectivity(net);
  const double halved = (net.matrix.sum() - net.matrix.trace()) / 2.0;
  CHECK(std::abs(upper - halved) < 1e-12);
}

TEST_CASE("connectivity_difference") {
  const auto ones = filled_network(ItemSubset::All10, 1.0);
  const auto zeros = filled_network(ItemSubset::All10, 0.0);
  CHECK(connectivity_difference(ones, ones) == 0.0);
  CHECK(connectivity_difference(ones, zeros) == 45.0);
  CHECK(connectivity_difference(zeros, ones) == -45.0);
  CHECK_THROWS_AS(connectivity_difference(ones, filled_network(ItemSubset::PositiveOnly, 1.0)),
                  SubsetMismatch);
}

TEST_CASE("DOT export") {
  auto net = filled_network(ItemSubset::All10, 0.0);
  net.matrix(0, 4) = net.matrix(4, 0) = 0.8;  // CAL-HOP
  const auto dot = export_network(net, NetworkFormat::Dot);
  CHECK(dot.find("CAL -- HOP [penwidth=4.200, color=blue") != std::string::npos);
  CHECK(std::count(dot.begin(), dot.end(), '-') == 2);  // one edge

  net.matrix(5, 6) = net.matrix(6, 5) = -0.5;
  net.matrix(7, 8) = net.matrix(8, 7) = 0.05;  // below display threshold
  const auto dot2 = export_network(net, NetworkFormat::Dot);
  CHECK(dot2.find("DEP -- STR [penwidth=3.000, color=red") != std::string::npos);
  CHECK(dot2.find("VOI -- SEE") == std::string::npos);

  const auto empty = export_network(filled_network(ItemSubset::All10, 0.0), NetworkFormat::Dot);
  CHECK(empty.find("--") == std::string::npos);
  for (auto code : {"DEP", "HAR", "SEE", "STR", "VOI", "CAL", "HOP", "SLE", "SOC", "THI"}) {
    CHECK(empty.find(std::string("  ") + code + ";") != std::string::npos);
  }
}

TEST_CASE("JSON export round trip") {
  std::mt19937_64 gen(3);
  std::vector<EmaVector> days;
  for (int i = 0; i < 30; ++i) days.push_back(testutil::random_ema(gen));
  const auto net = pearson_network(days, ItemSubset::All10);
  const auto text = export_network(net, NetworkFormat::Json);
  CHECK(text.find("\"items\"") < text.find("\"n_samples\""));
  CHECK(text.find("\"n_samples\"") < text.find("\"matrix\""));
  CHECK(parse_network_json(text) == net);
  CHECK_THROWS_AS(parse_network_json("{\"items\":[\"A\"],\"n_samples\":1,\"matrix\":[[1,2]]}"), InvalidConfig);
}

TEST_CASE("network invariants over random samples") {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<int> len(3, 30);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<EmaVector> days(static_cast<std::size_t>(len(gen)));
    for (auto& d : days) d = testutil::random_ema(gen);
    const auto net = pearson_network(days, ItemSubset::All10);

    CHECK(net.matrix == net.matrix.transpose());
    CHECK((net.matrix.diagonal().array() == 1.0).all());
    CHECK(net.matrix.cwiseAbs().maxCoeff() <= 1.0);

    // Direct two-pass formula on every pair.
    for (std::size_t i = 0; i < 10; ++i) {
      for (std::size_t j = i + 1; j < 10; ++j) {
        std::vector<double> x, y;
        for (const auto& d : days) {
          x.push_back(d[i]);
          y.push_back(d[j]);
        }
        CHECK(std::abs(net.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) -
                       oracle::pearson(x, y)) <= 1e-12);
      }
    }

    // Order of days does not matter.
    auto shuffled = days;
    std::shuffle(shuffled.begin(), shuffled.end(), gen);
    CHECK(pearson_network(shuffled, ItemSubset::All10).matrix.isApprox(net.matrix, 1e-12));
  }
}

TEST_CASE("affine transforms of one item") {
  std::mt19937_64 gen(23);
  std::normal_distribution<double> n01;
  for (int rep = 0; rep < 100; ++rep) {
    Eigen::MatrixXd x(15, 5);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = n01(gen);
    const Eigen::MatrixXd r = correlation_matrix(x);

    Eigen::MatrixXd shifted = x;
    shifted.col(2) = shifted.col(2).array() * 3.5 + 7.0;
    CHECK(correlation_matrix(shifted).isApprox(r, 1e-12));

    Eigen::MatrixXd flipped = x;
    flipped.col(2) *= -2.0;
    Eigen::MatrixXd expected = r;
    expected.row(2) *= -1.0;
    expected.col(2) *= -1.0;  // (2,2) flipped twice
    CHECK(correlation_matrix(flipped).isApprox(expected, 1e-12));
  }
}

TEST_CASE("correlation kernel templated on scalar") {
  Eigen::MatrixXf x(4, 2);
  x << 0, 3, 1, 2, 2, 1, 3, 0;
  const Eigen::MatrixXf r = correlation_matrix(x);
  CHECK(r(0, 1) == doctest::Approx(-1.0f));
  CHECK(upper_triangle_sum(r) == doctest::Approx(-1.0f));
}
