#include "emanet/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

#include "emanet/errors.hpp"

namespace emanet {

namespace {

constexpr std::array<std::string_view, kEmaItemCount> kItemCodes = {
    "CAL", "SOC", "SLE", "THI", "HOP", "DEP", "STR", "VOI", "SEE", "HAR"};

constexpr std::array<std::string_view, kEmaItemCount> kItemColumns = {
    "ema_calm",      "ema_social",   "ema_sleeping", "ema_think",
    "ema_hopeful",   "ema_depressed", "ema_stressed", "ema_voices",
    "ema_seeing",    "ema_harm"};

constexpr std::array<std::string_view, kFeatureCount> kFeatureColumns = {
    "locations_visited", "calls_made",   "calls_received",
    "sms_sent",          "sms_received", "conversations_detected"};

constexpr std::string_view kHeader =
    "date,ema_calm,ema_social,ema_sleeping,ema_think,ema_hopeful,ema_depressed,"
    "ema_stressed,ema_voices,ema_seeing,ema_harm,locations_visited,calls_made,"
    "calls_received,sms_sent,sms_received,conversations_detected";

constexpr std::size_t kColumnCount = 1 + kEmaItemCount + kFeatureCount;

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::optional<std::int64_t> parse_int(std::string_view s) {
  std::int64_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

}  // namespace

std::string_view item_code(std::size_t index) { return kItemCodes.at(index); }
std::string_view item_column(std::size_t index) { return kItemColumns.at(index); }
std::string_view feature_column(Feature f) {
  return kFeatureColumns.at(static_cast<std::size_t>(f));
}
std::string_view csv_header() { return kHeader; }

EmaVector::EmaVector(const std::array<int, kEmaItemCount>& scores) {
  for (std::size_t i = 0; i < kEmaItemCount; ++i) {
    if (scores[i] < 0 || scores[i] > kMaxEmaScore) {
      throw std::out_of_range("EMA score out of range for " +
                              std::string(kItemColumns[i]));
    }
    scores_[i] = static_cast<std::uint8_t>(scores[i]);
  }
}

std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  const auto y = parse_int(text.substr(0, 4));
  const auto m = parse_int(text.substr(5, 2));
  const auto d = parse_int(text.substr(8, 2));
  if (!y || !m || !d || *y < 0 || *m < 0 || *d < 0) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{static_cast<int>(*y)},
                                        std::chrono::month{static_cast<unsigned>(*m)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::string_view to_string(EmaSource s) {
  switch (s) {
    case EmaSource::Reported: return "reported";
    case EmaSource::Backfilled1: return "backfilled-1";
    case EmaSource::Backfilled2: return "backfilled-2";
    case EmaSource::None: return "none";
  }
  return "none";
}

ParticipantDataset::ParticipantDataset(std::string participant_id,
                                       std::vector<DailyRecord> records)
    : participant_id_(std::move(participant_id)), records_(std::move(records)) {
  std::stable_sort(records_.begin(), records_.end(),
                   [](const DailyRecord& a, const DailyRecord& b) { return a.date < b.date; });
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (i > 0 && records_[i].date == records_[i - 1].date) {
      throw std::invalid_argument("duplicate date " + format_date(records_[i].date));
    }
    if (records_[i].has_ema() != (records_[i].source != EmaSource::None)) {
      throw std::invalid_argument("EMA presence disagrees with source on " +
                                  format_date(records_[i].date));
    }
  }
}

std::size_t ParticipantDataset::usable_days() const {
  return static_cast<std::size_t>(std::count_if(
      records_.begin(), records_.end(), [](const DailyRecord& r) { return r.has_ema(); }));
}

ParticipantDataset parse_participant(const std::filesystem::path& path, CsvSchema schema) {
  std::ifstream in(path);
  if (!std::filesystem::is_regular_file(path) || !in) {
    throw FileNotFound(path.string());
  }
  return parse_participant(in, path.stem().string(), schema);
}

ParticipantDataset parse_participant(std::istream& in, std::string participant_id,
                                     CsvSchema /*schema*/) {
  std::string line;
  std::size_t row = 0;

  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line()) throw SchemaViolation(1, "", "missing header");
  if (line != kHeader) throw SchemaViolation(1, "", "header does not match schema");

  std::vector<DailyRecord> records;
  std::map<Date, std::size_t> seen;
  while (next_line()) {
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != kColumnCount) {
      throw SchemaViolation(row, "", "expected " + std::to_string(kColumnCount) +
                                         " fields, found " + std::to_string(fields.size()));
    }

    DailyRecord rec;
    const auto date = parse_date(fields[0]);
    if (!date) {
      throw SchemaViolation(row, "date", "unparseable date '" + std::string(fields[0]) + "'");
    }
    rec.date = *date;
    if (auto [it, inserted] = seen.emplace(*date, row); !inserted) {
      throw SchemaViolation(row, "date", "duplicate date " + std::string(fields[0]) +
                                             " (first at row " + std::to_string(it->second) + ")");
    }

    std::size_t present = 0;
    for (std::size_t i = 0; i < kEmaItemCount; ++i) present += !fields[1 + i].empty();
    if (present != 0 && present != kEmaItemCount) {
      throw SchemaViolation(row, "", "EMA cells must be all present or all empty");
    }
    if (present == kEmaItemCount) {
      std::array<int, kEmaItemCount> scores{};
      for (std::size_t i = 0; i < kEmaItemCount; ++i) {
        const auto v = parse_int(fields[1 + i]);
        if (!v || *v < 0 || *v > kMaxEmaScore) {
          throw SchemaViolation(row, std::string(kItemColumns[i]),
                                "EMA score '" + std::string(fields[1 + i]) +
                                    "' outside 0..3");
        }
        scores[i] = static_cast<int>(*v);
      }
      rec.ema = EmaVector(scores);
      rec.source = EmaSource::Reported;
    }

    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const auto cell = fields[1 + kEmaItemCount + f];
      if (cell.empty()) continue;
      const auto v = parse_int(cell);
      if (!v || *v < 0) {
        throw SchemaViolation(row, std::string(kFeatureColumns[f]),
                              "count '" + std::string(cell) +
                                  "' is not a non-negative integer");
      }
      rec.sensors.counts[f] = *v;
    }
    records.push_back(std::move(rec));
  }
  return ParticipantDataset(std::move(participant_id), std::move(records));
}

void write_participant(std::ostream& out, const ParticipantDataset& ds) {
  out << kHeader << '\n';
  for (const auto& rec : ds.records()) {
    out << format_date(rec.date);
    const bool reported = rec.source == EmaSource::Reported;
    for (std::size_t i = 0; i < kEmaItemCount; ++i) {
      out << ',';
      if (reported) out << (*rec.ema)[i];
    }
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      out << ',';
      if (rec.sensors.counts[f]) out << *rec.sensors.counts[f];
    }
    out << '\n';
  }
}

void write_participant(const std::filesystem::path& path, const ParticipantDataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open for writing: " + path.string());
  write_participant(out, ds);
}

ParticipantDataset backfill_emas(const ParticipantDataset& ds) {
  const auto& src = ds.records();
  std::map<Date, std::size_t> reported;
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i].source == EmaSource::Reported) reported.emplace(src[i].date, i);
  }

  std::vector<DailyRecord> out = src;
  for (auto& rec : out) {
    if (rec.source == EmaSource::Reported) continue;
    rec.ema.reset();
    rec.source = EmaSource::None;
    for (int k = 1; k <= kBackfillWindowDays; ++k) {
      const auto it = reported.find(rec.date + std::chrono::days{k});
      if (it == reported.end()) continue;
      rec.ema = src[it->second].ema;
      rec.source = k == 1 ? EmaSource::Backfilled1 : EmaSource::Backfilled2;
      break;
    }
  }
  return ParticipantDataset(ds.participant_id(), std::move(out));
}

}  // namespace emanet
