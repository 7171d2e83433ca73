#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "emanet/contexts.hpp"
#include "emanet/netcore.hpp"
#include "emanet/permtest.hpp"
#include "emanet/synthgen.hpp"

namespace emanet::cli {

inline constexpr std::string_view kToolVersion = "1.0.0";

// Exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitStatistical = 3;

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

struct AnalysisOptions {
  ContextSpec context = context_for(Feature::LocationsVisited);
  ItemSubset subset = ItemSubset::All10;
  std::uint64_t seed = 0;
  std::size_t permutations = kDefaultPermutations;
  std::size_t sample_size = kDefaultSampleSize;
  bool emit_differences = false;
  bool verbose_indices = false;
  unsigned threads = 1;
};

struct AnalyzeOptions : AnalysisOptions {
  std::filesystem::path input;
  std::filesystem::path outdir;
};

struct CohortOptions : AnalysisOptions {
  std::filesystem::path input_dir;
  std::filesystem::path outdir;
  std::vector<ContextSpec> contexts;  // falls back to AnalysisOptions::context
};

struct SynthOptions {
  std::optional<std::filesystem::path> config;
  SynthConfig synth;  // used when no config file is given
  std::filesystem::path out;
  std::optional<std::filesystem::path> write_config;
  bool ground_truth = false;
};

struct ExportOptions {
  std::optional<std::filesystem::path> input;    // participant CSV
  std::optional<std::filesystem::path> network;  // network JSON
  ContextSpec context = context_for(Feature::LocationsVisited);
  std::optional<Category> category;              // empty: all EMA days
  ItemSubset subset = ItemSubset::All10;
  NetworkFormat format = NetworkFormat::Dot;
  double threshold = kDefaultEdgeThreshold;
  std::optional<std::filesystem::path> out;      // stdout when empty
};

// Each command writes human-readable progress to `out`, errors to `err`, and
// returns an exit code.
int cmd_validate(const std::filesystem::path& input, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_cohort(const CohortOptions& opts, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err);
int cmd_export_network(const ExportOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace emanet::cli
