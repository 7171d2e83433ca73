#include "emanet/synthgen.hpp"

#include <cmath>

#include "emanet/contexts.hpp"
#include "emanet/errors.hpp"
#include "emanet/rng.hpp"
#include "json.hpp"

namespace emanet {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kMaxPositiveCount = 1000;

// Factor F with F F^T = R for a symmetric PSD R.
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& r, std::string_view name) {
  const auto k = static_cast<Eigen::Index>(kEmaItemCount);
  if (r.rows() != k || r.cols() != k) {
    throw InvalidConfig(std::string(name) + ": correlation target must be 10x10");
  }
  if (!r.allFinite() || (r - r.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidConfig(std::string(name) + ": correlation target is not symmetric");
  }
  if ((r.diagonal().array() - 1.0).abs().maxCoeff() > 1e-12) {
    throw InvalidConfig(std::string(name) + ": correlation target needs a unit diagonal");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(r);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    throw InvalidConfig(std::string(name) + ": correlation target is not positive semidefinite");
  }
  return eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

void check_probability(double p, std::string_view name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidConfig(std::string(name) + " must lie in [0, 1]");
  }
}

EmaVector draw_ema(Rng& rng, const Eigen::MatrixXd& factor, const Eigen::VectorXd& means) {
  Eigen::VectorXd z(static_cast<Eigen::Index>(kEmaItemCount));
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal();
  const Eigen::VectorXd latent = factor * z + means;
  std::array<int, kEmaItemCount> scores{};
  for (std::size_t i = 0; i < kEmaItemCount; ++i) {
    scores[i] = discretize(latent(static_cast<Eigen::Index>(i)));
  }
  return EmaVector(scores);
}

std::int64_t draw_positive_count(Rng& rng, double p) {
  std::int64_t count = 1;
  while (count < kMaxPositiveCount && !rng.bernoulli(p)) ++count;
  return count;
}

Eigen::MatrixXd simulate_discretized_correlation(const LatentModel& model, std::size_t draws,
                                                 Rng& rng) {
  const auto factor = psd_factor(model.correlation, "ground truth");
  const auto k = static_cast<Eigen::Index>(kEmaItemCount);
  // Integer-valued moments; exact in double for any realistic draw count.
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(k, k);
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(k);
  Eigen::VectorXd x(k);
  for (std::size_t n = 0; n < draws; ++n) {
    const auto ema = draw_ema(rng, factor, model.means);
    for (Eigen::Index i = 0; i < k; ++i) x(i) = ema[static_cast<std::size_t>(i)];
    sums += x;
    cross.selfadjointView<Eigen::Upper>().rankUpdate(x);
  }
  const double n = static_cast<double>(draws);
  Eigen::MatrixXd cov = cross.selfadjointView<Eigen::Upper>();
  cov = cov / n - (sums / n) * (sums / n).transpose();
  Eigen::MatrixXd r = Eigen::MatrixXd::Identity(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double denom = cov(i, i) * cov(j, j);
      r(i, j) = r(j, i) = denom > 0.0 ? cov(i, j) / std::sqrt(denom) : 0.0;
    }
  }
  return r;
}

}  // namespace

int discretize(double latent) {
  int score = 0;
  for (double t : kLikertThresholds) score += latent > t;
  return score;
}

LatentModel block_model(ItemSubset block, double r) {
  LatentModel m;
  const auto idx = subset_indices(block);
  for (auto i : idx) {
    for (auto j : idx) {
      if (i != j) m.correlation(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r;
    }
  }
  return m;
}

void SynthConfig::validate() const {
  if (report_cadence < 1) throw InvalidConfig("report_cadence must be >= 1");
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    check_probability(context_mix[f], "context_mix." + std::string(feature_column(kAllFeatures[f])));
    check_probability(missing_sensor_rate[f],
                      "missing_sensor_rate." + std::string(feature_column(kAllFeatures[f])));
  }
  if (!(positive_count_p > 0.0 && positive_count_p <= 1.0)) {
    throw InvalidConfig("positive_count_p must lie in (0, 1]");
  }
  for (const auto* m : {&isolation, &sociability}) {
    psd_factor(m->correlation, m == &isolation ? "isolation" : "sociability");
    if (m->means.size() != static_cast<Eigen::Index>(kEmaItemCount) || !m->means.allFinite()) {
      throw InvalidConfig("latent means must be 10 finite values");
    }
  }
}

SynthConfig null_config(std::uint64_t seed, std::size_t n_days) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_days = n_days;
  cfg.participant_id = "null-" + std::to_string(seed);
  return cfg;
}

SynthConfig planted_config(std::uint64_t seed, std::size_t n_days, double isolation_r,
                           double sociability_r, Feature feature) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_days = n_days;
  cfg.planted_feature = feature;
  cfg.isolation = block_model(ItemSubset::PositiveOnly, isolation_r);
  cfg.sociability = block_model(ItemSubset::PositiveOnly, sociability_r);
  cfg.participant_id = "planted-" + std::to_string(seed);
  return cfg;
}

ParticipantDataset generate(const SynthConfig& cfg) {
  cfg.validate();
  const auto iso_factor = psd_factor(cfg.isolation.correlation, "isolation");
  const auto soc_factor = psd_factor(cfg.sociability.correlation, "sociability");
  Rng rng(cfg.seed);

  std::vector<DailyRecord> records;
  records.reserve(cfg.n_days);
  for (std::size_t day = 0; day < cfg.n_days; ++day) {
    DailyRecord rec;
    rec.date = cfg.start_date + std::chrono::days{static_cast<long>(day)};

    bool planted_sociable = false;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      const bool sociable = rng.bernoulli(cfg.context_mix[f]);
      const std::int64_t count = sociable ? draw_positive_count(rng, cfg.positive_count_p) : 0;
      const bool missing = rng.bernoulli(cfg.missing_sensor_rate[f]);
      if (kAllFeatures[f] == cfg.planted_feature) planted_sociable = sociable;
      if (!missing) rec.sensors.counts[f] = count;
    }

    const auto& model = planted_sociable ? cfg.sociability : cfg.isolation;
    const auto ema = draw_ema(rng, planted_sociable ? soc_factor : iso_factor, model.means);
    if ((day + 1) % cfg.report_cadence == 0) {
      rec.ema = ema;
      rec.source = EmaSource::Reported;
    }
    records.push_back(std::move(rec));
  }
  return ParticipantDataset(cfg.participant_id, std::move(records));
}

double GroundTruth::connectivity_difference(ItemSubset subset) const {
  const auto idx = subset_indices(subset);
  const auto first = static_cast<Eigen::Index>(idx.front());
  const auto k = static_cast<Eigen::Index>(idx.size());
  return upper_triangle_sum(isolation.block(first, first, k, k)) -
         upper_triangle_sum(sociability.block(first, first, k, k));
}

GroundTruth ground_truth(const SynthConfig& cfg, std::size_t draws, std::uint64_t oracle_seed) {
  cfg.validate();
  GroundTruth gt;
  gt.draws = draws;
  // Common random numbers: both categories see the same latent draws, so
  // identical targets give identical matrices.
  Rng iso_rng(derive_seed(oracle_seed, "latent"));
  Rng soc_rng(derive_seed(oracle_seed, "latent"));
  gt.isolation = simulate_discretized_correlation(cfg.isolation, draws, iso_rng);
  gt.sociability = simulate_discretized_correlation(cfg.sociability, draws, soc_rng);
  return gt;
}

// ---------------------------------------------------------------------------
// JSON config

namespace {

Feature parse_feature(const std::string& flag) {
  const auto ctx = parse_context_flag(flag);
  if (ctx.is_baseline()) throw InvalidConfig("planted_feature cannot be baseline");
  return *ctx.feature;
}

std::array<double, kFeatureCount> parse_per_feature(const Json& j, double fallback) {
  std::array<double, kFeatureCount> out;
  out.fill(fallback);
  if (j.is_number()) {
    out.fill(j.get<double>());
    return out;
  }
  for (const auto& [key, value] : j.items()) {
    const auto f = parse_feature(key);
    out[static_cast<std::size_t>(f)] = value.get<double>();
  }
  return out;
}

LatentModel parse_model(const Json& j) {
  LatentModel m;
  const auto k = static_cast<Eigen::Index>(kEmaItemCount);
  if (j.contains("block")) {
    m = block_model(parse_subset_flag(j.at("block").get<std::string>()), j.at("r").get<double>());
  }
  if (j.contains("correlation")) {
    const auto rows = j.at("correlation").get<std::vector<std::vector<double>>>();
    if (static_cast<Eigen::Index>(rows.size()) != k) throw InvalidConfig("correlation must be 10x10");
    for (Eigen::Index i = 0; i < k; ++i) {
      if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != k) {
        throw InvalidConfig("correlation must be 10x10");
      }
      for (Eigen::Index c = 0; c < k; ++c) {
        m.correlation(i, c) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
      }
    }
  }
  if (j.contains("means")) {
    const auto means = j.at("means").get<std::vector<double>>();
    if (means.size() != kEmaItemCount) throw InvalidConfig("means must have 10 entries");
    for (std::size_t i = 0; i < kEmaItemCount; ++i) m.means(static_cast<Eigen::Index>(i)) = means[i];
  }
  return m;
}

Json model_json(const LatentModel& m) {
  Json j;
  std::vector<std::vector<double>> rows(kEmaItemCount, std::vector<double>(kEmaItemCount));
  for (std::size_t i = 0; i < kEmaItemCount; ++i) {
    for (std::size_t c = 0; c < kEmaItemCount; ++c) {
      rows[i][c] = m.correlation(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c));
    }
  }
  j["correlation"] = rows;
  j["means"] = std::vector<double>(m.means.data(), m.means.data() + m.means.size());
  return j;
}

}  // namespace

SynthConfig parse_synth_config(std::string_view json_text) {
  try {
    const auto j = Json::parse(json_text);
    SynthConfig cfg;
    cfg.participant_id = j.value("participant_id", cfg.participant_id);
    if (j.contains("start_date")) {
      const auto d = parse_date(j.at("start_date").get<std::string>());
      if (!d) throw InvalidConfig("start_date must be YYYY-MM-DD");
      cfg.start_date = *d;
    }
    cfg.n_days = j.value("n_days", cfg.n_days);
    cfg.report_cadence = j.value("report_cadence", cfg.report_cadence);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("planted_feature")) {
      cfg.planted_feature = parse_feature(j.at("planted_feature").get<std::string>());
    }
    if (j.contains("context_mix")) cfg.context_mix = parse_per_feature(j.at("context_mix"), 0.5);
    if (j.contains("missing_sensor_rate")) {
      cfg.missing_sensor_rate = parse_per_feature(j.at("missing_sensor_rate"), 0.0);
    }
    cfg.positive_count_p = j.value("positive_count_p", cfg.positive_count_p);
    if (j.contains("isolation")) cfg.isolation = parse_model(j.at("isolation"));
    if (j.contains("sociability")) cfg.sociability = parse_model(j.at("sociability"));
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("malformed synth config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InvalidConfig(e.what());
  }
}

std::string synth_config_json(const SynthConfig& cfg) {
  Json j;
  j["participant_id"] = cfg.participant_id;
  j["start_date"] = format_date(cfg.start_date);
  j["n_days"] = cfg.n_days;
  j["report_cadence"] = cfg.report_cadence;
  j["seed"] = cfg.seed;
  j["planted_feature"] = std::string(context_flag(context_for(cfg.planted_feature)));
  Json mix, missing;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const auto flag = std::string(context_flag(context_for(kAllFeatures[f])));
    mix[flag] = cfg.context_mix[f];
    missing[flag] = cfg.missing_sensor_rate[f];
  }
  j["context_mix"] = mix;
  j["missing_sensor_rate"] = missing;
  j["positive_count_p"] = cfg.positive_count_p;
  j["isolation"] = model_json(cfg.isolation);
  j["sociability"] = model_json(cfg.sociability);
  return j.dump(2);
}

}  // namespace emanet
