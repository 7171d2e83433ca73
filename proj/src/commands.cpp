#include "emanet/commands.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "emanet/errors.hpp"
#include "emanet/ingest.hpp"
#include "emanet/report.hpp"
#include "json.hpp"

namespace emanet::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) {
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return os.str();
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFound(path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return sha256_hex(os.str());
}

namespace {

// Collects written artifacts and their digests for manifest.json.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  void write(const std::string& name, const std::string& bytes) {
    std::ofstream out(dir_ / name, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir_ / name).string());
    out << bytes;
    files_.push_back({{"file", name}, {"sha256", sha256_hex(bytes)}});
  }

  void write_json(const std::string& name, const Json& j) { write(name, j.dump(2) + "\n"); }

  Json files() const { return files_; }
  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
  Json files_ = Json::array();
};

Json t_json(double t) {
  if (std::isinf(t)) return t > 0 ? "inf" : "-inf";
  return t;
}

Json stats_json(const DistributionStats& s) { return {{"mean", s.mean}, {"std", s.std}}; }

Json run_json(const ParticipantDataset& ds, const PermutationRun& run, bool emit_differences) {
  Json j;
  j["context"] = std::string(context_flag(run.context));
  j["subset"] = std::string(subset_flag(run.config.subset));
  j["n_permutations"] = run.config.n_permutations;
  j["sample_size"] = run.config.sample_size;
  j["run_seed"] = run.config.seed;
  j["stats"] = stats_json(run.stats);
  if (emit_differences) j["differences"] = run.differences;
  if (!run.samples.empty()) {
    auto iterations = Json::array();
    for (const auto& s : run.samples) {
      auto dates = [&](const std::vector<DayRef>& refs) {
        auto a = Json::array();
        for (auto r : refs) a.push_back(format_date(ds[r].date));
        return a;
      };
      iterations.push_back({{"first", dates(s.first)}, {"second", dates(s.second)}});
    }
    j["iterations"] = std::move(iterations);
  }
  return j;
}

Json comparison_json(const Comparison& c) {
  return {{"convention", "paired t-test of baseline differences minus context differences"},
          {"pairing", "by permutation index; iterations are i.i.d."},
          {"t", t_json(c.test.t)},
          {"p", report::machine_p(c.test.p)},
          {"df", c.test.df},
          {"mean_difference", c.test.mean_difference},
          {"sd_difference", c.test.sd_difference},
          {"degenerate", c.test.degenerate},
          {"significance", std::string(report::significance_marker(c.test.p))}};
}

struct Analysis {
  CategoryPools pools;
  std::size_t baseline_days = 0;
  PermutationRun context_run;
  PermutationRun baseline_run;
  Comparison comparison;
};

PermutationConfig permutation_config(const AnalysisOptions& opts, std::uint64_t run_seed) {
  PermutationConfig cfg;
  cfg.n_permutations = opts.permutations;
  cfg.sample_size = opts.sample_size;
  cfg.subset = opts.subset;
  cfg.seed = run_seed;
  cfg.threads = opts.threads;
  cfg.record_indices = opts.verbose_indices;
  return cfg;
}

// `ds` must already be backfilled. Throws InsufficientPool.
Analysis run_analysis(const ParticipantDataset& ds, const ContextSpec& ctx, const AnalysisOptions& opts) {
  Analysis a;
  a.pools = categorize(ds, ctx);
  const auto pool = baseline_pool(ds);
  a.baseline_days = pool.size();
  a.context_run = run_context_permutation(
      ds, a.pools, permutation_config(opts, context_run_seed(opts.seed, ctx)));
  a.baseline_run = run_baseline_permutation(
      ds, pool, permutation_config(opts, context_run_seed(opts.seed, baseline_context())));
  a.comparison = compare_to_baseline(a.context_run, a.baseline_run);
  return a;
}

Json config_echo(const AnalysisOptions& opts, const ContextSpec& ctx) {
  return {{"context", std::string(context_flag(ctx))},
          {"subset", std::string(subset_flag(opts.subset))},
          {"master_seed", opts.seed},
          {"permutations", opts.permutations},
          {"sample_size", opts.sample_size},
          {"emit_differences", opts.emit_differences},
          {"verbose_indices", opts.verbose_indices}};
}

void write_analysis(const fs::path& outdir, const ParticipantDataset& ds, const Json& input,
                    const AnalysisOptions& opts, const ContextSpec& ctx, const Analysis& a) {
  OutputDir out(outdir);

  Json run;
  run["tool"] = "emanet";
  run["version"] = std::string(kToolVersion);
  run["participant_id"] = ds.participant_id();
  run["input"] = input;
  run["config"] = config_echo(opts, ctx);
  run["pools"] = {{"isolation_days", a.pools.isolation_days.size()},
                  {"sociability_days", a.pools.sociability_days.size()},
                  {"excluded_days", a.pools.excluded_days.size()},
                  {"baseline_days", a.baseline_days}};
  run["context_run"] = run_json(ds, a.context_run, opts.emit_differences);
  run["baseline"] = stats_json(a.comparison.baseline);
  run["comparison"] = comparison_json(a.comparison);
  out.write_json("run.json", run);

  Json baseline;
  baseline["tool"] = "emanet";
  baseline["participant_id"] = ds.participant_id();
  baseline["baseline_run"] = run_json(ds, a.baseline_run, opts.emit_differences);
  out.write_json("baseline.json", baseline);

  std::ostringstream hist;
  report::write_histogram_csv(
      hist, report::shared_histogram(a.baseline_run.differences, a.context_run.differences));
  out.write("histogram.csv", hist.str());

  const auto iso_net = pearson_network(ds, a.pools.isolation_days, opts.subset);
  const auto soc_net = pearson_network(ds, a.pools.sociability_days, opts.subset);
  out.write("network_isolation.json", export_network(iso_net, NetworkFormat::Json));
  out.write("network_isolation.dot", export_network(iso_net, NetworkFormat::Dot));
  out.write("network_sociability.json", export_network(soc_net, NetworkFormat::Json));
  out.write("network_sociability.dot", export_network(soc_net, NetworkFormat::Dot));

  const report::AnalysisRow row{opts.subset, a.comparison};
  out.write("table.txt", report::render_analysis_table(ds.participant_id(), ctx, {&row, 1}));

  Json manifest;
  manifest["tool"] = "emanet";
  manifest["version"] = std::string(kToolVersion);
  manifest["command"] = "analyze";
  manifest["master_seed"] = opts.seed;
  manifest["inputs"] = Json::array({input});
  manifest["config"] = config_echo(opts, ctx);
  manifest["outputs"] = out.files();
  // The manifest itself is written last and not listed.
  std::ofstream(outdir / "manifest.json", std::ios::binary) << manifest.dump(2) << '\n';
}

// Parses and backfills; schema problems are reported on `err`.
std::optional<ParticipantDataset> load(const fs::path& path, std::ostream& err) {
  try {
    return backfill_emas(parse_participant(path));
  } catch (const FileNotFound& e) {
    err << "error: " << e.what() << '\n';
  } catch (const SchemaViolation& e) {
    err << "error: " << path.string() << ": " << e.what() << '\n';
  }
  return std::nullopt;
}

Json input_json(const fs::path& path) {
  return {{"path", path.filename().string()}, {"sha256", sha256_file(path)}};
}

std::string eligibility_reason(const EligibilityReport& r, std::size_t baseline_days,
                               std::size_t sample_size) {
  std::ostringstream os;
  os << context_flag(r.context) << ": ";
  if (!r.eligible) {
    const auto cat = *r.limiting;
    os << to_string(cat) << " " << (cat == Category::Isolation ? r.isolation_days : r.sociability_days)
       << " < " << r.min_days_per_category;
  } else {
    os << "baseline " << baseline_days << " < " << 2 * sample_size;
  }
  return os.str();
}

}  // namespace

int cmd_validate(const fs::path& input, std::ostream& out, std::ostream& err) {
  ParticipantDataset raw;
  try {
    raw = parse_participant(input);
  } catch (const FileNotFound& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const SchemaViolation& e) {
    err << "error: " << input.string() << ": " << e.what() << '\n';
    return kExitInput;
  }
  const auto ds = backfill_emas(raw);
  std::size_t reported = 0, backfilled = 0;
  for (const auto& r : ds.records()) {
    reported += r.source == EmaSource::Reported;
    backfilled += r.source == EmaSource::Backfilled1 || r.source == EmaSource::Backfilled2;
  }
  out << "participant " << ds.participant_id() << ": " << ds.size() << " days, "
      << ds.usable_days() << " with EMA (" << reported << " reported, " << backfilled
      << " backfilled), " << ds.size() - ds.usable_days() << " omitted\n\n";

  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %10s %12s %9s  %s\n", "context", "isolation",
                "sociability", "excluded", "eligible");
  out << buf;
  const auto base = eligibility(ds, baseline_context());
  for (const auto& ctx : all_feature_contexts()) {
    const auto r = eligibility(ds, ctx);
    const bool ok = r.eligible && base.eligible;
    std::snprintf(buf, sizeof buf, "%-16s %10zu %12zu %9zu  %s\n",
                  std::string(context_flag(ctx)).c_str(), r.isolation_days, r.sociability_days,
                  r.excluded_days, ok ? "yes" : "no");
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "%-16s %10zu %12s %9zu  %s\n", "baseline", base.isolation_days, "-",
                base.excluded_days, base.eligible ? "yes" : "no");
  out << buf;
  out << "\nrequirement: >= " << kDefaultMinDaysPerCategory << " days per category, >= "
      << 2 * kDefaultMinDaysPerCategory << " days for the baseline\n";
  return kExitOk;
}

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err) {
  if (opts.context.is_baseline()) {
    err << "error: analyze needs a behavioral context, not baseline\n";
    return kExitUsage;
  }
  const auto ds = load(opts.input, err);
  if (!ds) return kExitInput;
  try {
    const auto a = run_analysis(*ds, opts.context, opts);
    write_analysis(opts.outdir, *ds, input_json(opts.input), opts, opts.context, a);
    out << "participant " << ds->participant_id() << ", " << context_flag(opts.context) << " ("
        << subset_flag(opts.subset) << "): t = " << report::format_t(a.comparison.test.t)
        << ", p " << (a.comparison.test.p < report::kSmallestReportedP ? "" : "= ")
        << report::format_p(a.comparison.test.p) << " "
        << report::significance_marker(a.comparison.test.p) << "\n";
    return kExitOk;
  } catch (const InsufficientPool& e) {
    err << "error: " << e.what() << '\n';
    return kExitStatistical;
  } catch (const InvalidConfig& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_cohort(const CohortOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<ContextSpec> contexts = opts.contexts;
  if (contexts.empty()) contexts.push_back(opts.context);
  for (const auto& c : contexts) {
    if (c.is_baseline()) {
      err << "error: cohort needs behavioral contexts, not baseline\n";
      return kExitUsage;
    }
  }
  if (!fs::is_directory(opts.input_dir)) {
    err << "error: not a directory: " << opts.input_dir.string() << '\n';
    return kExitInput;
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(opts.input_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());

  std::vector<report::CohortRow> rows;
  std::vector<report::CohortExclusion> excluded, notes;
  Json participants = Json::array();

  for (const auto& file : files) {
    const std::string id = file.stem().string();
    std::ostringstream load_err;
    const auto ds = load(file, load_err);
    if (!ds) {
      std::string msg = load_err.str();
      while (!msg.empty() && msg.back() == '\n') msg.pop_back();
      excluded.push_back({id, msg});
      continue;
    }

    const auto base = eligibility(*ds, baseline_context(), opts.sample_size);
    report::CohortRow row{id, {}, {}};
    std::vector<std::string> reasons;
    bool any = false;
    for (const auto& ctx : contexts) {
      const auto e = eligibility(*ds, ctx, opts.sample_size);
      if (!e.eligible || !base.eligible) {
        reasons.push_back(eligibility_reason(e, base.isolation_days, opts.sample_size));
        row.contexts.emplace_back();
        continue;
      }
      const auto a = run_analysis(*ds, ctx, opts);
      write_analysis(opts.outdir / id / std::string(context_flag(ctx)), *ds, input_json(file), opts,
                     ctx, a);
      row.baseline = a.comparison.baseline;
      row.contexts.emplace_back(a.comparison);
      any = true;
    }

    std::string joined;
    for (const auto& r : reasons) joined += (joined.empty() ? "" : "; ") + r;
    if (any) {
      if (!reasons.empty()) notes.push_back({id, joined});
      rows.push_back(std::move(row));
    } else {
      excluded.push_back({id, "not eligible for any context (" + joined + ")"});
    }
  }

  fs::create_directories(opts.outdir);
  const auto table = report::render_cohort_table(contexts, opts.subset, rows, excluded, notes);
  std::ofstream(opts.outdir / "cohort_table.txt", std::ios::binary) << table;
  out << table;

  if (rows.empty()) {
    err << "error: no eligible participants in " << opts.input_dir.string() << '\n';
    return kExitInput;
  }
  return kExitOk;
}

int cmd_synth(const SynthOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    SynthConfig cfg = opts.synth;
    if (opts.config) {
      std::ifstream in(*opts.config);
      if (!in) throw FileNotFound(opts.config->string());
      std::ostringstream text;
      text << in.rdbuf();
      cfg = parse_synth_config(text.str());
    }
    write_participant(opts.out, generate(cfg));
    if (opts.write_config) {
      std::ofstream(*opts.write_config, std::ios::binary) << synth_config_json(cfg) << '\n';
    }
    out << "wrote " << cfg.n_days << " days to " << opts.out.string() << '\n';
    if (opts.ground_truth) {
      const auto gt = ground_truth(cfg);
      out << "ground truth connectivity difference (isolation - sociability): all "
          << gt.connectivity_difference(ItemSubset::All10) << ", positive "
          << gt.connectivity_difference(ItemSubset::PositiveOnly) << ", negative "
          << gt.connectivity_difference(ItemSubset::NegativeOnly) << '\n';
    }
    return kExitOk;
  } catch (const FileNotFound& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InvalidConfig& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

int cmd_export_network(const ExportOptions& opts, std::ostream& out, std::ostream& err) {
  CorrelationNetwork net;
  try {
    if (opts.network) {
      std::ifstream in(*opts.network);
      if (!in) throw FileNotFound(opts.network->string());
      std::ostringstream text;
      text << in.rdbuf();
      net = parse_network_json(text.str());
    } else if (opts.input) {
      const auto ds = load(*opts.input, err);
      if (!ds) return kExitInput;
      std::vector<DayRef> days;
      if (opts.category) {
        if (opts.context.is_baseline()) {
          err << "error: --category needs a behavioral context\n";
          return kExitUsage;
        }
        days = categorize(*ds, opts.context).pool(*opts.category);
      } else {
        days = baseline_pool(*ds);
      }
      net = pearson_network(*ds, days, opts.subset);
    } else {
      err << "error: export-network needs --input or --network\n";
      return kExitUsage;
    }
  } catch (const FileNotFound& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InvalidConfig& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InsufficientData& e) {
    err << "error: " << e.what() << '\n';
    return kExitStatistical;
  }

  const auto text = export_network(net, opts.format, opts.threshold);
  if (opts.out) {
    std::ofstream(*opts.out, std::ios::binary) << text;
  } else {
    out << text;
  }
  return kExitOk;
}

}  // namespace emanet::cli
