// emanet: context-filtered EMA correlation networks and permutation tests.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "emanet/commands.hpp"

namespace {

using namespace emanet;

std::vector<ContextSpec> parse_contexts(const std::vector<std::string>& flags) {
  std::vector<ContextSpec> out;
  for (const auto& flag : flags) {
    std::stringstream ss(flag);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) out.push_back(parse_context_flag(item));
    }
  }
  return out;
}

const std::vector<std::string> kContextFlags = {"locations",    "calls_made",   "calls_received",
                                                "sms_sent",     "sms_received", "conversations"};

void add_analysis_flags(CLI::App* cmd, cli::AnalysisOptions& opts, std::string& subset) {
  cmd->add_option("--subset", subset, "EMA items: all|positive|negative")
      ->check(CLI::IsMember({"all", "positive", "negative"}))
      ->capture_default_str();
  cmd->add_option("--seed", opts.seed, "Master seed")->capture_default_str();
  cmd->add_option("--permutations", opts.permutations, "Permutation iterations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--sample-size", opts.sample_size, "Days per network sample")
      ->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20))
      ->capture_default_str();
  cmd->add_option("--threads", opts.threads, "Worker threads (0 = all cores)")->capture_default_str();
  cmd->add_flag("--emit-differences", opts.emit_differences,
                "Include per-iteration differences in run.json / baseline.json");
  cmd->add_flag("--verbose-indices", opts.verbose_indices,
                "Log the days sampled in every iteration");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-filtered EMA correlation networks with permutation testing"};
  app.set_version_flag("--version", std::string(cli::kToolVersion));
  app.require_subcommand(1);

  // validate
  std::string validate_input;
  auto* validate = app.add_subcommand("validate", "Check a participant CSV and report eligibility");
  validate->add_option("input", validate_input, "Participant CSV")->required();

  // analyze
  cli::AnalyzeOptions analyze_opts;
  std::string analyze_context = "locations", analyze_subset = "all";
  auto* analyze = app.add_subcommand("analyze", "Permutation test of one context against baseline");
  analyze->add_option("input", analyze_opts.input, "Participant CSV")->required();
  analyze->add_option("--context", analyze_context, "Behavioral context")
      ->check(CLI::IsMember(kContextFlags))
      ->capture_default_str();
  analyze->add_option("--out", analyze_opts.outdir, "Output directory")->required();
  add_analysis_flags(analyze, analyze_opts, analyze_subset);

  // cohort
  cli::CohortOptions cohort_opts;
  std::vector<std::string> cohort_contexts;
  std::string cohort_subset = "all";
  auto* cohort = app.add_subcommand("cohort", "Analyze every participant CSV in a directory");
  cohort->add_option("inputs", cohort_opts.input_dir, "Directory of participant CSVs")->required();
  cohort->add_option("--context", cohort_contexts,
                     "Behavioral context(s); repeat or comma-separate for several")
      ->required();
  cohort->add_option("--out", cohort_opts.outdir, "Output directory")->required();
  add_analysis_flags(cohort, cohort_opts, cohort_subset);

  // synth
  cli::SynthOptions synth_opts;
  std::string synth_kind = "planted", synth_feature = "locations";
  double iso_r = 0.6, soc_r = 0.0;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic participant CSV");
  synth->add_option("--config", synth_opts.config, "JSON synth config (overrides other flags)");
  synth->add_option("--kind", synth_kind, "planted|null")
      ->check(CLI::IsMember({"planted", "null"}))
      ->capture_default_str();
  synth->add_option("--days", synth_opts.synth.n_days, "Number of days")->capture_default_str();
  synth->add_option("--seed", synth_opts.synth.seed, "Generator seed")->capture_default_str();
  synth->add_option("--cadence", synth_opts.synth.report_cadence, "Days between EMA reports")
      ->capture_default_str();
  synth->add_option("--feature", synth_feature, "Planted feature")
      ->check(CLI::IsMember(kContextFlags))
      ->capture_default_str();
  synth->add_option("--isolation-r", iso_r, "Positive-item latent r on isolation days")
      ->capture_default_str();
  synth->add_option("--sociability-r", soc_r, "Positive-item latent r on sociable days")
      ->capture_default_str();
  synth->add_option("--id", synth_opts.synth.participant_id, "Participant id");
  synth->add_option("--out", synth_opts.out, "Output CSV")->required();
  synth->add_option("--write-config", synth_opts.write_config, "Also write the effective config");
  synth->add_flag("--ground-truth", synth_opts.ground_truth,
                  "Print the simulated discretized connectivity difference");

  // export-network
  cli::ExportOptions export_opts;
  std::string export_context = "locations", export_category = "all", export_subset = "all",
              export_format = "dot";
  auto* exp = app.add_subcommand("export-network", "Write an all-day correlation network");
  exp->add_option("--input", export_opts.input, "Participant CSV");
  exp->add_option("--network", export_opts.network, "Network JSON to convert");
  exp->add_option("--context", export_context, "Behavioral context")
      ->check(CLI::IsMember(kContextFlags))
      ->capture_default_str();
  exp->add_option("--category", export_category, "isolation|sociability|all")
      ->check(CLI::IsMember({"isolation", "sociability", "all"}))
      ->capture_default_str();
  exp->add_option("--subset", export_subset, "all|positive|negative")
      ->check(CLI::IsMember({"all", "positive", "negative"}))
      ->capture_default_str();
  exp->add_option("--format", export_format, "dot|json")
      ->check(CLI::IsMember({"dot", "json"}))
      ->capture_default_str();
  exp->add_option("--threshold", export_opts.threshold, "DOT edge display threshold |r|")
      ->capture_default_str();
  exp->add_option("--out", export_opts.out, "Output file (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cli::cmd_validate(validate_input, std::cout, std::cerr);
    if (*analyze) {
      analyze_opts.context = parse_context_flag(analyze_context);
      analyze_opts.subset = parse_subset_flag(analyze_subset);
      return cli::cmd_analyze(analyze_opts, std::cout, std::cerr);
    }
    if (*cohort) {
      cohort_opts.contexts = parse_contexts(cohort_contexts);
      cohort_opts.subset = parse_subset_flag(cohort_subset);
      return cli::cmd_cohort(cohort_opts, std::cout, std::cerr);
    }
    if (*synth) {
      const auto id = synth_opts.synth.participant_id;
      const auto feature = *parse_context_flag(synth_feature).feature;
      auto base = synth_kind == "null"
                      ? null_config(synth_opts.synth.seed, synth_opts.synth.n_days)
                      : planted_config(synth_opts.synth.seed, synth_opts.synth.n_days, iso_r,
                                       soc_r, feature);
      base.report_cadence = synth_opts.synth.report_cadence;
      base.planted_feature = feature;
      if (synth->count("--id") > 0) base.participant_id = id;
      synth_opts.synth = base;
      return cli::cmd_synth(synth_opts, std::cout, std::cerr);
    }
    if (*exp) {
      export_opts.context = parse_context_flag(export_context);
      if (export_category != "all") {
        export_opts.category =
            export_category == "isolation" ? Category::Isolation : Category::Sociability;
      }
      export_opts.subset = parse_subset_flag(export_subset);
      export_opts.format = export_format == "json" ? NetworkFormat::Json : NetworkFormat::Dot;
      return cli::cmd_export_network(export_opts, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitUsage;
  }
  return cli::kExitUsage;
}
