#pragma once

#include <array>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace emanet {

// ---------------------------------------------------------------------------
// EMA items

inline constexpr std::size_t kEmaItemCount = 10;
inline constexpr std::size_t kPositiveItemCount = 5;
inline constexpr int kMaxEmaScore = 3;

// Fixed questionnaire order. Indices 0-4 are positive items, 5-9 negative.
enum class EmaItem : std::uint8_t {
  Calm,
  Social,
  Sleeping,
  Think,
  Hopeful,
  Depressed,
  Stressed,
  Voices,
  Seeing,
  Harm,
};

std::string_view item_code(std::size_t index);    // "CAL", "SOC", ...
std::string_view item_column(std::size_t index);  // "ema_calm", ...
inline constexpr bool is_positive_item(std::size_t index) {
  return index < kPositiveItemCount;
}

// Ten Likert scores in questionnaire order, each in [0, 3].
class EmaVector {
 public:
  using Scores = std::array<std::uint8_t, kEmaItemCount>;

  EmaVector() = default;
  // Throws std::out_of_range for any score outside [0, 3].
  explicit EmaVector(const std::array<int, kEmaItemCount>& scores);

  int operator[](std::size_t item) const { return scores_[item]; }
  const Scores& scores() const { return scores_; }

  friend bool operator==(const EmaVector&, const EmaVector&) = default;

 private:
  Scores scores_{};
};

// ---------------------------------------------------------------------------
// Sensor features

enum class Feature : std::uint8_t {
  LocationsVisited,
  CallsMade,
  CallsReceived,
  SmsSent,
  SmsReceived,
  ConversationsDetected,
};

inline constexpr std::size_t kFeatureCount = 6;
inline constexpr std::array<Feature, kFeatureCount> kAllFeatures = {
    Feature::LocationsVisited, Feature::CallsMade,   Feature::CallsReceived,
    Feature::SmsSent,          Feature::SmsReceived, Feature::ConversationsDetected};

std::string_view feature_column(Feature f);  // CSV column name

// Daily aggregate counts; an empty optional means the feature was not measured.
struct SensorDay {
  std::array<std::optional<std::int64_t>, kFeatureCount> counts{};

  std::optional<std::int64_t> get(Feature f) const {
    return counts[static_cast<std::size_t>(f)];
  }
  void set(Feature f, std::optional<std::int64_t> v) {
    counts[static_cast<std::size_t>(f)] = v;
  }

  friend bool operator==(const SensorDay&, const SensorDay&) = default;
};

// ---------------------------------------------------------------------------
// Records and datasets

using Date = std::chrono::sys_days;

// Strict YYYY-MM-DD. Returns nullopt for anything that is not a valid date.
std::optional<Date> parse_date(std::string_view text);
std::string format_date(Date d);

enum class EmaSource : std::uint8_t { Reported, Backfilled1, Backfilled2, None };

std::string_view to_string(EmaSource s);

struct DailyRecord {
  Date date{};
  std::optional<EmaVector> ema;
  EmaSource source = EmaSource::None;
  SensorDay sensors;

  bool has_ema() const { return ema.has_value(); }

  friend bool operator==(const DailyRecord&, const DailyRecord&) = default;
};

// One participant's day-ordered records. Immutable once constructed.
class ParticipantDataset {
 public:
  ParticipantDataset() = default;
  // Sorts by date. Throws std::invalid_argument on duplicate dates or on a
  // record whose ema/source fields disagree.
  ParticipantDataset(std::string participant_id, std::vector<DailyRecord> records);

  const std::string& participant_id() const { return participant_id_; }
  const std::vector<DailyRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const DailyRecord& operator[](std::size_t i) const { return records_[i]; }

  // Records with an EMA (reported or backfilled).
  std::size_t usable_days() const;

  friend bool operator==(const ParticipantDataset&, const ParticipantDataset&) = default;

 private:
  std::string participant_id_;
  std::vector<DailyRecord> records_;
};

// ---------------------------------------------------------------------------
// CSV ingestion

enum class CsvSchema { DailyAggregateV1 };

// The exact header line of the participant CSV schema.
std::string_view csv_header();

// Throws FileNotFound or SchemaViolation. The participant id is the file stem.
ParticipantDataset parse_participant(const std::filesystem::path& path,
                                     CsvSchema schema = CsvSchema::DailyAggregateV1);
ParticipantDataset parse_participant(std::istream& in, std::string participant_id,
                                     CsvSchema schema = CsvSchema::DailyAggregateV1);

// Writes the CSV schema. Only reported EMAs are written; backfilled values are
// derived data and are regenerated by backfill_emas after parsing.
void write_participant(std::ostream& out, const ParticipantDataset& ds);
void write_participant(const std::filesystem::path& path, const ParticipantDataset& ds);

// ---------------------------------------------------------------------------
// Backfill

inline constexpr int kBackfillWindowDays = 2;

/// Copies each reported EMA onto the one or two calendar days before it.
/// A day without its own report takes the report from d+1 when present,
/// otherwise from d+2; days outside every window get EmaSource::None.
/// Reported EMAs and sensor values are never modified.
ParticipantDataset backfill_emas(const ParticipantDataset& ds);

}  // namespace emanet
