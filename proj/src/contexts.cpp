#include "emanet/contexts.hpp"

#include <array>
#include <stdexcept>

namespace emanet {

namespace {

struct ContextName {
  std::string_view flag;
  std::string_view title;
};

constexpr std::array<ContextName, kFeatureCount> kFeatureNames = {{
    {"locations", "Daily Number of Locations Visited"},
    {"calls_made", "Daily Number of Calls Made"},
    {"calls_received", "Daily Number of Calls Received"},
    {"sms_sent", "Daily Number of SMS Sent"},
    {"sms_received", "Daily Number of SMS Received"},
    {"conversations", "Daily Number of Conversations"},
}};

constexpr ContextName kBaselineName{"baseline", "Baseline"};

}  // namespace

std::string_view to_string(Category c) {
  return c == Category::Isolation ? "isolation" : "sociability";
}

ContextSpec baseline_context() { return ContextSpec{std::nullopt, {}, {}}; }

ContextSpec context_for(Feature f) { return ContextSpec{f, {0, 0}, {1, std::nullopt}}; }

std::vector<ContextSpec> all_feature_contexts() {
  std::vector<ContextSpec> out;
  for (Feature f : kAllFeatures) out.push_back(context_for(f));
  return out;
}

ContextSpec parse_context_flag(std::string_view flag) {
  if (flag == kBaselineName.flag) return baseline_context();
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    if (kFeatureNames[i].flag == flag) return context_for(kAllFeatures[i]);
  }
  throw std::invalid_argument("unknown context '" + std::string(flag) + "'");
}

std::string_view context_flag(const ContextSpec& ctx) {
  if (ctx.is_baseline()) return kBaselineName.flag;
  return kFeatureNames[static_cast<std::size_t>(*ctx.feature)].flag;
}

std::string_view context_title(const ContextSpec& ctx) {
  if (ctx.is_baseline()) return kBaselineName.title;
  return kFeatureNames[static_cast<std::size_t>(*ctx.feature)].title;
}

CategoryPools categorize(const ParticipantDataset& ds, const ContextSpec& ctx) {
  if (ctx.is_baseline()) {
    throw std::invalid_argument("categorize: baseline has no categories");
  }
  CategoryPools pools{ctx, {}, {}, {}};
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& rec = ds[i];
    const auto count = rec.sensors.get(*ctx.feature);
    if (!rec.has_ema() || !count) {
      pools.excluded_days.push_back(i);
    } else if (ctx.isolation(*count)) {
      pools.isolation_days.push_back(i);
    } else if (ctx.sociability(*count)) {
      pools.sociability_days.push_back(i);
    } else {
      pools.excluded_days.push_back(i);
    }
  }
  return pools;
}

std::vector<DayRef> baseline_pool(const ParticipantDataset& ds) {
  std::vector<DayRef> out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds[i].has_ema()) out.push_back(i);
  }
  return out;
}

EligibilityReport eligibility(const ParticipantDataset& ds, const ContextSpec& ctx,
                              std::size_t min_days_per_category) {
  EligibilityReport report;
  report.context = ctx;
  report.min_days_per_category = min_days_per_category;

  if (ctx.is_baseline()) {
    const auto n = baseline_pool(ds).size();
    report.isolation_days = report.sociability_days = n;
    report.excluded_days = ds.size() - n;
    report.eligible = n >= 2 * min_days_per_category;
    return report;
  }

  const auto pools = categorize(ds, ctx);
  report.isolation_days = pools.isolation_days.size();
  report.sociability_days = pools.sociability_days.size();
  report.excluded_days = pools.excluded_days.size();
  report.eligible = report.isolation_days >= min_days_per_category &&
                    report.sociability_days >= min_days_per_category;
  if (!report.eligible) {
    report.limiting = report.isolation_days <= report.sociability_days
                          ? Category::Isolation
                          : Category::Sociability;
  }
  return report;
}

}  // namespace emanet
