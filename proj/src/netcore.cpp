#include "emanet/netcore.hpp"

#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "emanet/errors.hpp"
#include "json.hpp"

namespace emanet {

std::vector<std::size_t> subset_indices(ItemSubset subset) {
  std::size_t first = 0;
  std::size_t last = kEmaItemCount;
  if (subset == ItemSubset::PositiveOnly) last = kPositiveItemCount;
  if (subset == ItemSubset::NegativeOnly) first = kPositiveItemCount;
  std::vector<std::size_t> out;
  for (std::size_t i = first; i < last; ++i) out.push_back(i);
  return out;
}

ItemSubset parse_subset_flag(std::string_view flag) {
  if (flag == "all") return ItemSubset::All10;
  if (flag == "positive") return ItemSubset::PositiveOnly;
  if (flag == "negative") return ItemSubset::NegativeOnly;
  throw std::invalid_argument("unknown subset '" + std::string(flag) + "'");
}

std::string_view subset_flag(ItemSubset subset) {
  switch (subset) {
    case ItemSubset::All10: return "all";
    case ItemSubset::PositiveOnly: return "positive";
    case ItemSubset::NegativeOnly: return "negative";
  }
  return "all";
}

std::string_view subset_title(ItemSubset subset) {
  switch (subset) {
    case ItemSubset::All10: return "All EMAs";
    case ItemSubset::PositiveOnly: return "Positive EMAs";
    case ItemSubset::NegativeOnly: return "Negative EMAs";
  }
  return "All EMAs";
}

std::vector<std::string> subset_codes(ItemSubset subset) {
  std::vector<std::string> out;
  for (auto i : subset_indices(subset)) out.emplace_back(item_code(i));
  return out;
}

Eigen::MatrixXd sample_matrix(std::span<const EmaVector> days, ItemSubset subset) {
  const auto idx = subset_indices(subset);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(days.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < days.size(); ++r) {
    for (std::size_t c = 0; c < idx.size(); ++c) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = days[r][idx[c]];
    }
  }
  return x;
}

Eigen::MatrixXd sample_matrix(const ParticipantDataset& ds, std::span<const DayRef> days,
                              ItemSubset subset) {
  const auto idx = subset_indices(subset);
  Eigen::MatrixXd x(static_cast<Eigen::Index>(days.size()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < days.size(); ++r) {
    const auto& rec = ds[days[r]];
    if (!rec.ema) {
      throw std::invalid_argument("sample_matrix: day " + format_date(rec.date) + " has no EMA");
    }
    for (std::size_t c = 0; c < idx.size(); ++c) {
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (*rec.ema)[idx[c]];
    }
  }
  return x;
}

namespace {

CorrelationNetwork network_from_samples(const Eigen::MatrixXd& x, ItemSubset subset) {
  if (x.rows() < 2) {
    throw InsufficientData("pearson_network: need at least 2 days, got " +
                           std::to_string(x.rows()));
  }
  return CorrelationNetwork{subset_codes(subset), correlation_matrix(x),
                            static_cast<std::size_t>(x.rows())};
}

}  // namespace

CorrelationNetwork pearson_network(std::span<const EmaVector> days, ItemSubset subset) {
  return network_from_samples(sample_matrix(days, subset), subset);
}

CorrelationNetwork pearson_network(const ParticipantDataset& ds, std::span<const DayRef> days,
                                   ItemSubset subset) {
  return network_from_samples(sample_matrix(ds, days, subset), subset);
}

double connectivity(const CorrelationNetwork& net) { return upper_triangle_sum(net.matrix); }

double connectivity_difference(const CorrelationNetwork& a, const CorrelationNetwork& b) {
  if (a.items != b.items) {
    throw SubsetMismatch("connectivity_difference: networks cover different items");
  }
  return connectivity(a) - connectivity(b);
}

namespace {

void write_dot(std::ostream& out, const CorrelationNetwork& net, double threshold) {
  out << "graph ema_network {\n";
  out << "  node [shape=circle];\n";
  for (const auto& item : net.items) out << "  " << item << ";\n";
  const auto k = static_cast<Eigen::Index>(net.size());
  char buf[96];
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = i + 1; j < k; ++j) {
      const double r = net.matrix(i, j);
      if (r == 0.0 || std::abs(r) < threshold) continue;
      std::snprintf(buf, sizeof buf, " [penwidth=%.3f, color=%s, label=\"%.2f\"];\n",
                    1.0 + 4.0 * std::abs(r), r > 0.0 ? "blue" : "red", r);
      out << "  " << net.items[static_cast<std::size_t>(i)] << " -- "
          << net.items[static_cast<std::size_t>(j)] << buf;
    }
  }
  out << "}\n";
}

void write_json(std::ostream& out, const CorrelationNetwork& net) {
  nlohmann::ordered_json j;
  j["items"] = net.items;
  j["n_samples"] = net.n_samples;
  auto rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < net.matrix.rows(); ++i) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index c = 0; c < net.matrix.cols(); ++c) row.push_back(net.matrix(i, c));
    rows.push_back(std::move(row));
  }
  j["matrix"] = std::move(rows);
  out << j.dump(2) << '\n';
}

}  // namespace

void export_network(std::ostream& out, const CorrelationNetwork& net, NetworkFormat format,
                    double edge_threshold) {
  if (format == NetworkFormat::Dot) {
    write_dot(out, net, edge_threshold);
  } else {
    write_json(out, net);
  }
}

std::string export_network(const CorrelationNetwork& net, NetworkFormat format,
                           double edge_threshold) {
  std::ostringstream os;
  export_network(os, net, format, edge_threshold);
  return os.str();
}

CorrelationNetwork parse_network_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    CorrelationNetwork net;
    net.items = j.at("items").get<std::vector<std::string>>();
    net.n_samples = j.at("n_samples").get<std::size_t>();
    const auto& rows = j.at("matrix");
    const auto k = static_cast<Eigen::Index>(net.items.size());
    if (!rows.is_array() || static_cast<Eigen::Index>(rows.size()) != k) {
      throw InvalidConfig("network matrix dimension does not match items");
    }
    net.matrix.resize(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      const auto& row = rows[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != k) {
        throw InvalidConfig("network matrix is not square");
      }
      for (Eigen::Index c = 0; c < k; ++c) net.matrix(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
    if (net.matrix != net.matrix.transpose()) {
      throw InvalidConfig("network matrix is not symmetric");
    }
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("malformed network JSON: ") + e.what());
  }
}

}  // namespace emanet
