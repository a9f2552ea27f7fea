#include "bspcoa/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <string>

namespace {

struct Flags {
  std::string tau = "auto";
  std::string delimiter = "auto";
  std::string prevalence;
  std::string distance = "bray-curtis";
  long long subsample_m = -1;
};

double parse_double(const std::string &flag, const std::string &text) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw bspcoa::UsageError(flag + ": '" + text + "' is not a number");
  return v;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Bayesian sparse principal coordinates analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bspcoa 0.1.0");

  bspcoa::RunConfig cfg;
  Flags flags;
  CLI::Option *prevalence_opt = nullptr;

  auto *fit = app.add_subcommand("fit", "Fit BSPCoA to a count table and write coordinates, loadings, diagnostics");
  auto *simulate = app.add_subcommand("simulate", "Run the two-group Dirichlet-multinomial study and write results.csv");
  auto *project = app.add_subcommand("project", "Fit on a subsample and embed every sample by linear projection");
  auto *diagnose = app.add_subcommand("diagnose", "Report delta, ExI and delta* for given loadings and coordinates");

  for (CLI::App *sub : {fit, simulate, project, diagnose}) {
    sub->add_option("--output-dir", cfg.output_dir, "Directory for output files (created if absent)");
    sub->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    sub->add_option("--k", cfg.k, "Number of ordination axes")->capture_default_str();
    sub->add_option("--iters", cfg.iters, "Gibbs sweeps per outer iteration")->capture_default_str();
    sub->add_option("--burn-in", cfg.burn_in, "Discarded sweeps per outer iteration")->capture_default_str();
    sub->add_option("--ci-level", cfg.ci_level, "Credible level for selection")->capture_default_str();
    sub->add_option("--tau", flags.tau, "Global scale, or 'auto' for 1/(p n log n)")->capture_default_str();
    sub->add_option("--max-outer", cfg.max_outer, "Maximum outer (Procrustes) iterations")->capture_default_str();
    sub->add_flag("--force", cfg.force, "Overwrite existing output files");
    if (sub == simulate) continue;
    sub->add_option("--input", cfg.input, "Sample-by-taxon table (comma or tab separated)");
    sub->add_option("--distance", flags.distance, "euclidean | bray-curtis | hellinger")->capture_default_str();
    sub->add_option("--delimiter", flags.delimiter, "auto | comma | tab")->capture_default_str();
    sub->add_option("--groups", cfg.groups, "Optional sample_id,group table for scoring and plots");
    auto *opt = sub->add_option("--prevalence-threshold", flags.prevalence,
                                "Drop taxa present in fewer than this fraction of samples (bare flag: 0.1)")
                    ->expected(0, 1);
    if (!prevalence_opt) prevalence_opt = opt;
    sub->add_flag("--relative-abundance", cfg.relative_abundance, "Convert counts to relative abundances");
  }
  simulate->add_flag("--relative-abundance", cfg.relative_abundance, "Use relative abundances as surrogate features");
  fit->add_flag("--plot", cfg.plot, "Also write ordination.svg and loadings_heatmap.svg");
  simulate->add_option("--scenario", cfg.scenario, "baseline | sparse | perturbed")->capture_default_str();
  simulate->add_option("--replicates", cfg.replicates, "Number of replicates")->capture_default_str();
  simulate->add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
  project->add_option("--subsample-m", flags.subsample_m, "Subsample size m (default min(n, 100))");
  project->add_flag("--full-pcoa", cfg.full_pcoa, "Also time and write classical PCoA on all samples");
  diagnose->add_option("--loadings", cfg.loadings, "loadings.csv from fit, or a wide taxa x axes table")->required();
  diagnose->add_option("--coordinates", cfg.coordinates, "Reference coordinates (pcoa_* columns used if present)")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  return bspcoa::run_guarded([&] {
    for (CLI::App *sub : {fit, simulate, project, diagnose})
      if (sub->parsed()) cfg.command = sub->get_name();
    bspcoa::parse_distance_kind(flags.distance);
    cfg.distance = flags.distance;
    if (flags.tau != "auto") cfg.tau = parse_double("--tau", flags.tau);
    if (flags.delimiter == "comma") cfg.delimiter = ',';
    else if (flags.delimiter == "tab") cfg.delimiter = '\t';
    else if (flags.delimiter != "auto") throw bspcoa::UsageError("--delimiter must be auto, comma or tab");
    for (CLI::App *sub : {fit, project, diagnose})
      if (sub->parsed() && sub->count("--prevalence-threshold") > 0)
        cfg.prevalence_threshold = flags.prevalence.empty() ? 0.1 : parse_double("--prevalence-threshold", flags.prevalence);
    if (flags.subsample_m >= 0) cfg.subsample_m = static_cast<bspcoa::Index>(flags.subsample_m);
    else if (project->count("--subsample-m") > 0) throw bspcoa::UsageError("--subsample-m must be positive");
    return bspcoa::dispatch(cfg);
  });
}
