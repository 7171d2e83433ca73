#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emanet/ingest.hpp"

namespace emanet {

enum class Category : std::uint8_t { Isolation, Sociability };

std::string_view to_string(Category c);

// Inclusive count interval; an absent upper bound is unbounded.
struct CountPredicate {
  std::int64_t min = 0;
  std::optional<std::int64_t> max;

  bool operator()(std::int64_t count) const {
    return count >= min && (!max || count <= *max);
  }
  friend bool operator==(const CountPredicate&, const CountPredicate&) = default;
};

// A behavioral context: a sensor feature with its isolation / sociability
// split, or the unfiltered baseline when `feature` is empty.
struct ContextSpec {
  std::optional<Feature> feature;
  CountPredicate isolation{0, 0};
  CountPredicate sociability{1, std::nullopt};

  bool is_baseline() const { return !feature.has_value(); }

  friend bool operator==(const ContextSpec&, const ContextSpec&) = default;
};

ContextSpec baseline_context();
// The 0 vs >= 1 split used for every feature.
ContextSpec context_for(Feature f);

// The six feature contexts in CLI order.
std::vector<ContextSpec> all_feature_contexts();

// CLI flag values: locations|calls_made|calls_received|sms_sent|sms_received|
// conversations|baseline. Throws std::invalid_argument for anything else.
ContextSpec parse_context_flag(std::string_view flag);
std::string_view context_flag(const ContextSpec& ctx);
// Human-readable title, e.g. "Daily Number of Locations Visited".
std::string_view context_title(const ContextSpec& ctx);

// Day references are indices into ParticipantDataset::records().
using DayRef = std::size_t;

struct CategoryPools {
  ContextSpec context;
  std::vector<DayRef> isolation_days;
  std::vector<DayRef> sociability_days;
  std::vector<DayRef> excluded_days;

  const std::vector<DayRef>& pool(Category c) const {
    return c == Category::Isolation ? isolation_days : sociability_days;
  }
};

// Splits EMA-bearing days with a measured feature count into the two
// categories; everything else is excluded. Throws std::invalid_argument for
// the baseline context.
CategoryPools categorize(const ParticipantDataset& ds, const ContextSpec& ctx);

// Every EMA-bearing day, ignoring sensors.
std::vector<DayRef> baseline_pool(const ParticipantDataset& ds);

// ---------------------------------------------------------------------------
// Eligibility

inline constexpr std::size_t kDefaultMinDaysPerCategory = 25;

struct EligibilityReport {
  ContextSpec context;
  std::size_t isolation_days = 0;
  std::size_t sociability_days = 0;
  std::size_t excluded_days = 0;
  std::size_t min_days_per_category = kDefaultMinDaysPerCategory;
  bool eligible = false;
  // Category with the fewest days when ineligible.
  std::optional<Category> limiting;
};

// For the baseline context both counts hold the unfiltered pool size and the
// requirement is two disjoint samples, i.e. 2 * min_days_per_category.
EligibilityReport eligibility(const ParticipantDataset& ds, const ContextSpec& ctx,
                              std::size_t min_days_per_category = kDefaultMinDaysPerCategory);

}  // namespace emanet
