#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emanet/contexts.hpp"
#include "emanet/netcore.hpp"
#include "emanet/permtest.hpp"

namespace emanet::report {

// Sample quantile with linear interpolation between order statistics.
double quantile(std::vector<double> xs, double q);

// 2 * IQR * n^(-1/3) of the data.
double freedman_diaconis_width(std::span<const double> xs);

// Fixed-width bins shared by two distributions. The last bin is closed.
struct Histogram {
  double start = 0.0;
  double width = 1.0;
  std::vector<std::size_t> baseline_counts;
  std::vector<std::size_t> context_counts;

  std::size_t bins() const { return baseline_counts.size(); }
  double edge(std::size_t i) const { return start + width * static_cast<double>(i); }
};

inline constexpr std::size_t kMaxHistogramBins = 1000;

// Bin width from the Freedman-Diaconis rule on the pooled data, capped at
// kMaxHistogramBins bins across the pooled range.
Histogram shared_histogram(std::span<const double> baseline, std::span<const double> context);
void write_histogram_csv(std::ostream& out, const Histogram& h);

// "*" for p < 0.001, "**" for 0.001 <= p < 0.05, "" otherwise.
std::string_view significance_marker(double p);

inline constexpr double kSmallestReportedP = 1e-300;

// Text form: "< 1e-300" below the floor, otherwise 3 significant digits.
std::string format_p(double p);
// Machine form: 0 below the floor.
double machine_p(double p);
std::string format_t(double t);

// One row of a single-participant report (one item subset).
struct AnalysisRow {
  ItemSubset subset;
  Comparison comparison;
};

std::string render_analysis_table(std::string_view participant_id, const ContextSpec& context,
                                  std::span<const AnalysisRow> rows);

// One cohort participant: a comparison per requested context, empty when the
// participant was not eligible for that context.
struct CohortRow {
  std::string participant_id;
  DistributionStats baseline;
  std::vector<std::optional<Comparison>> contexts;
};

struct CohortExclusion {
  std::string participant_id;
  std::string reason;
};

std::string render_cohort_table(std::span<const ContextSpec> contexts, ItemSubset subset,
                                std::span<const CohortRow> rows,
                                std::span<const CohortExclusion> excluded,
                                std::span<const CohortExclusion> notes = {});

// Footnotes shared by both tables.
std::string table_footer();

}  // namespace emanet::report
