#include "emanet/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace emanet::report {

double quantile(std::vector<double> xs, double q) {
  if (xs.empty()) throw std::invalid_argument("quantile of empty data");
  std::sort(xs.begin(), xs.end());
  const double pos = q * static_cast<double>(xs.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, xs.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return xs[lo] + frac * (xs[hi] - xs[lo]);
}

double freedman_diaconis_width(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  std::vector<double> v(xs.begin(), xs.end());
  const double iqr = quantile(v, 0.75) - quantile(v, 0.25);
  return 2.0 * iqr / std::cbrt(static_cast<double>(xs.size()));
}

Histogram shared_histogram(std::span<const double> baseline, std::span<const double> context) {
  std::vector<double> pooled(baseline.begin(), baseline.end());
  pooled.insert(pooled.end(), context.begin(), context.end());
  if (pooled.empty()) throw std::invalid_argument("histogram of empty data");

  const auto [min_it, max_it] = std::minmax_element(pooled.begin(), pooled.end());
  const double lo = *min_it;
  const double range = *max_it - lo;

  Histogram h;
  h.start = lo;
  h.width = freedman_diaconis_width(pooled);
  std::size_t bins = 1;
  if (range <= 0.0) {
    h.width = 1.0;
  } else {
    if (!(h.width > 0.0) || range / h.width > static_cast<double>(kMaxHistogramBins)) {
      h.width = range / static_cast<double>(h.width > 0.0 ? kMaxHistogramBins : 10);
    }
    bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(range / h.width)));
  }
  h.baseline_counts.assign(bins, 0);
  h.context_counts.assign(bins, 0);

  auto bin_of = [&](double x) {
    const double pos = std::floor((x - lo) / h.width);
    if (pos < 0.0) return std::size_t{0};
    return std::min(bins - 1, static_cast<std::size_t>(pos));
  };
  for (double x : baseline) ++h.baseline_counts[bin_of(x)];
  for (double x : context) ++h.context_counts[bin_of(x)];
  return h;
}

void write_histogram_csv(std::ostream& out, const Histogram& h) {
  out << "bin_start,bin_end,baseline_count,context_count\n";
  char buf[128];
  for (std::size_t i = 0; i < h.bins(); ++i) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%zu,%zu\n", h.edge(i), h.edge(i + 1),
                  h.baseline_counts[i], h.context_counts[i]);
    out << buf;
  }
}

std::string_view significance_marker(double p) {
  if (p < 0.001) return "*";
  if (p < 0.05) return "**";
  return "";
}

std::string format_p(double p) {
  if (p < kSmallestReportedP) return "< 1e-300";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", p);
  return buf;
}

double machine_p(double p) { return p < kSmallestReportedP ? 0.0 : p; }

std::string format_t(double t) {
  if (std::isinf(t)) return t > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", t);
  return buf;
}

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::string(buf) == "-0.00" ? "0.00" : buf;
}

std::string t_cell(const TTestResult& test) {
  std::string marker(significance_marker(test.p));
  marker.resize(2, ' ');
  return format_t(test.t) + " " + marker;
}

// Column groups with a centered title above their column headers.
class TextTable {
 public:
  struct Group {
    std::string title;
    std::vector<std::string> headers;
  };

  explicit TextTable(std::vector<Group> groups) : groups_(std::move(groups)) {}

  void add_row(std::vector<std::vector<std::string>> cells) { rows_.push_back(std::move(cells)); }

  std::string render() const {
    std::vector<std::vector<std::size_t>> widths(groups_.size());
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      for (const auto& h : groups_[g].headers) widths[g].push_back(h.size());
      for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row[g].size(); ++c) {
          widths[g][c] = std::max(widths[g][c], row[g][c].size());
        }
      }
      std::size_t inner = 0;
      for (auto w : widths[g]) inner += w + 2;
      if (groups_[g].title.size() + 2 > inner) widths[g].back() += groups_[g].title.size() + 2 - inner;
    }

    auto group_width = [&](std::size_t g) {
      std::size_t w = 0;
      for (auto c : widths[g]) w += c + 2;
      return w;
    };

    std::ostringstream os;
    auto line = [&](auto&& cell_text, bool left_first) {
      std::string out;
      for (std::size_t g = 0; g < groups_.size(); ++g) {
        if (g > 0) out += "|";
        for (std::size_t c = 0; c < widths[g].size(); ++c) {
          const std::string text = cell_text(g, c);
          const std::size_t pad = widths[g][c] - std::min(widths[g][c], text.size());
          if (left_first && g == 0) {
            out += " " + text + std::string(pad, ' ') + " ";
          } else {
            out += " " + std::string(pad, ' ') + text + " ";
          }
        }
      }
      while (!out.empty() && out.back() == ' ') out.pop_back();
      os << out << '\n';
    };

    std::string title_line;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      if (g > 0) title_line += "|";
      const auto w = group_width(g);
      const auto& t = groups_[g].title;
      const std::size_t left = (w - t.size()) / 2;
      title_line += std::string(left, ' ') + t + std::string(w - t.size() - left, ' ');
    }
    while (!title_line.empty() && title_line.back() == ' ') title_line.pop_back();
    os << title_line << '\n';

    line([&](std::size_t g, std::size_t c) { return groups_[g].headers[c]; }, true);

    std::string rule;
    for (std::size_t g = 0; g < groups_.size(); ++g) {
      if (g > 0) rule += "+";
      rule += std::string(group_width(g), '-');
    }
    os << rule << '\n';

    for (const auto& row : rows_) {
      line([&](std::size_t g, std::size_t c) { return row[g][c]; }, true);
    }
    return os.str();
  }

 private:
  std::vector<Group> groups_;
  std::vector<std::vector<std::vector<std::string>>> rows_;
};

}  // namespace

std::string table_footer() {
  return "* p < 0.001   ** p < 0.05\n"
         "t: paired-sample t-test of baseline minus context differences, paired by\n"
         "permutation index. Iterations are i.i.d., so the pairing carries no information.\n"
         "Note: the permutation differences are overlapping resamples of the same days,\n"
         "which violates the t-test's independence assumption; p-values describe this\n"
         "procedure and are not calibrated error rates.\n";
}

std::string render_analysis_table(std::string_view participant_id, const ContextSpec& context,
                                  std::span<const AnalysisRow> rows) {
  TextTable table({{"", {""}},
                   {"Baseline", {"mean", "sd"}},
                   {std::string(context_title(context)), {"mean", "sd", "t", "p"}}});
  for (const auto& row : rows) {
    const auto& c = row.comparison;
    table.add_row({{std::string(subset_title(row.subset))},
                   {fixed2(c.baseline.mean), fixed2(c.baseline.std)},
                   {fixed2(c.context.mean), fixed2(c.context.std), t_cell(c.test), format_p(c.test.p)}});
  }
  std::ostringstream os;
  os << "Participant " << participant_id << ": baseline and " << context_title(context)
     << " test results\n\n";
  os << table.render() << '\n' << table_footer();
  return os.str();
}

std::string render_cohort_table(std::span<const ContextSpec> contexts, ItemSubset subset,
                                std::span<const CohortRow> rows,
                                std::span<const CohortExclusion> excluded,
                                std::span<const CohortExclusion> notes) {
  std::vector<TextTable::Group> groups{{"", {"ID"}}, {"Baseline", {"mean", "sd"}}};
  for (const auto& ctx : contexts) {
    groups.push_back({std::string(context_title(ctx)), {"mean", "sd", "t"}});
  }
  TextTable table(std::move(groups));
  for (const auto& row : rows) {
    std::vector<std::vector<std::string>> cells{
        {row.participant_id}, {fixed2(row.baseline.mean), fixed2(row.baseline.std)}};
    for (const auto& c : row.contexts) {
      if (c) {
        cells.push_back({fixed2(c->context.mean), fixed2(c->context.std), t_cell(c->test)});
      } else {
        cells.push_back({"n/a", "n/a", "n/a"});
      }
    }
    table.add_row(std::move(cells));
  }

  std::ostringstream os;
  os << "Participant results for paired-sample t-testing against baseline (" << subset_title(subset)
     << ")\n\n";
  os << table.render() << '\n' << table_footer();
  if (!notes.empty()) {
    os << "\nNot eligible for some contexts (n/a):\n";
    for (const auto& n : notes) os << "  " << n.participant_id << ": " << n.reason << '\n';
  }
  os << "\nExcluded participants: " << excluded.size() << '\n';
  for (const auto& e : excluded) os << "  " << e.participant_id << ": " << e.reason << '\n';
  return os.str();
}

}  // namespace emanet::report
