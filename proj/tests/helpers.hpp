#pragma once

#include <array>
#include <optional>
#include <random>
#include <vector>

#include "emanet/ingest.hpp"

namespace testutil {

inline emanet::Date day(int n) {
  return emanet::Date{std::chrono::year{2021} / 3 / 1} + std::chrono::days{n};
}

inline emanet::EmaVector ema(std::array<int, 10> s) { return emanet::EmaVector(s); }

inline emanet::EmaVector constant_ema(int v) {
  std::array<int, 10> s;
  s.fill(v);
  return emanet::EmaVector(s);
}

inline emanet::DailyRecord record(int n, std::optional<emanet::EmaVector> e = std::nullopt,
                                  std::optional<std::int64_t> locations = 1) {
  emanet::DailyRecord r;
  r.date = day(n);
  r.ema = e;
  r.source = e ? emanet::EmaSource::Reported : emanet::EmaSource::None;
  r.sensors.set(emanet::Feature::LocationsVisited, locations);
  return r;
}

inline emanet::EmaVector random_ema(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> d(0, 3);
  std::array<int, 10> s;
  for (auto& v : s) v = d(gen);
  return emanet::EmaVector(s);
}

}  // namespace testutil
