#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "emanet/ingest.hpp"
#include "emanet/netcore.hpp"

namespace emanet {

// Latent multivariate-normal model for the ten EMA items of one category.
struct LatentModel {
  Eigen::MatrixXd correlation = Eigen::MatrixXd::Identity(kEmaItemCount, kEmaItemCount);
  Eigen::VectorXd means = Eigen::VectorXd::Zero(kEmaItemCount);
};

// Identity correlation except for `r` between every pair inside `block`.
LatentModel block_model(ItemSubset block, double r);

// Standard-normal quartile boundaries; a latent value maps to the number of
// thresholds it exceeds, giving equiprobable scores 0-3 at zero mean.
inline constexpr std::array<double, 3> kLikertThresholds = {-0.67448975019608171, 0.0,
                                                            0.67448975019608171};
int discretize(double latent);

struct SynthConfig {
  std::string participant_id = "synthetic";
  Date start_date = Date{std::chrono::year{2020} / 1 / 1};
  std::size_t n_days = 300;
  // Days between EMA reports; reports fall on every report_cadence-th day.
  std::size_t report_cadence = 3;
  // Feature whose category selects the latent model for the day.
  Feature planted_feature = Feature::LocationsVisited;
  // Probability that a day is sociable (count >= 1), per feature.
  std::array<double, kFeatureCount> context_mix = {0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
  // Probability that a feature is unmeasured on a day, per feature.
  std::array<double, kFeatureCount> missing_sensor_rate = {};
  // Success probability of the geometric law for positive counts:
  // count = 1 + failures before the first success.
  double positive_count_p = 0.5;
  LatentModel isolation;
  LatentModel sociability;
  std::uint64_t seed = 0;

  // Throws InvalidConfig for probabilities outside [0, 1], a zero cadence,
  // or a target matrix that is not a symmetric unit-diagonal PSD matrix.
  void validate() const;
};

// Same latent model for both categories.
SynthConfig null_config(std::uint64_t seed, std::size_t n_days = 300);
// Positive-item intercorrelations `isolation_r` on isolation days and
// `sociability_r` on sociable days of the planted feature.
SynthConfig planted_config(std::uint64_t seed, std::size_t n_days = 300,
                           double isolation_r = 0.6, double sociability_r = 0.0,
                           Feature feature = Feature::LocationsVisited);

// Deterministic in cfg.seed. EMAs are emitted on report days only, so the
// result is a raw (not backfilled) dataset.
ParticipantDataset generate(const SynthConfig& cfg);

// Discretized-scale correlation targets estimated by simulating the latent
// draw and Likert discretization.
struct GroundTruth {
  Eigen::MatrixXd isolation;
  Eigen::MatrixXd sociability;
  std::size_t draws = 0;

  // Upper-triangle sum of isolation minus sociability over `subset`.
  double connectivity_difference(ItemSubset subset = ItemSubset::All10) const;
};

inline constexpr std::size_t kGroundTruthDraws = 1'000'000;

GroundTruth ground_truth(const SynthConfig& cfg, std::size_t draws = kGroundTruthDraws,
                         std::uint64_t oracle_seed = 0x6f7261636c65ULL);

// Declarative JSON config; see README for the key set.
SynthConfig parse_synth_config(std::string_view json_text);
std::string synth_config_json(const SynthConfig& cfg);

}  // namespace emanet
