#pragma once

// Subcommand drivers behind the bspcoa executable. Each cmd_* computes
// everything first, then writes its files in one pass. Errors surface as
// exceptions; run_guarded turns them into exit codes 1 (usage), 2 (data) and
// 3 (numerical).

#include "bspcoa/clustering.hpp"
#include "bspcoa/diagnostics.hpp"
#include "bspcoa/errors.hpp"
#include "bspcoa/io.hpp"
#include "bspcoa/ordination.hpp"
#include "bspcoa/simgen.hpp"
#include "bspcoa/surrogate.hpp"
#include "bspcoa/svg.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace bspcoa {

inline constexpr int kSchemaVersion = 1;

struct RunConfig {
  std::string command;
  std::filesystem::path input;
  std::filesystem::path output_dir;
  std::filesystem::path groups;      ///< optional sample_id,group table
  std::filesystem::path loadings;    ///< diagnose: loadings.csv or a wide p x k table
  std::filesystem::path coordinates; ///< diagnose: reference coordinates
  std::string distance = "bray-curtis";
  char delimiter = 0;
  Index k = 2;
  int iters = 2000;
  int burn_in = 500;
  double ci_level = 0.95;
  std::optional<double> tau; ///< empty = 1 / (p n log n)
  int max_outer = 20;
  double outer_tol = 1e-4;
  std::uint64_t seed = 20240601;
  std::optional<Index> subsample_m;
  int replicates = 100;
  std::string scenario = "baseline";
  std::optional<double> prevalence_threshold;
  bool relative_abundance = false;
  bool plot = false;
  bool force = false;
  bool full_pcoa = false;
  unsigned threads = 0;
};

/// Effective configuration echoed into every output. Output location and
/// --force are left out so that reruns into another directory match byte for byte.
inline nlohmann::ordered_json config_json(const RunConfig &c) {
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["input"] = c.input.string();
  if (!c.groups.empty()) j["groups"] = c.groups.string();
  if (c.command == "diagnose") {
    j["loadings"] = c.loadings.string();
    j["coordinates"] = c.coordinates.string();
  }
  j["distance"] = c.distance;
  j["k"] = c.k;
  j["iters"] = c.iters;
  j["burn_in"] = c.burn_in;
  j["ci_level"] = c.ci_level;
  j["tau"] = c.tau ? nlohmann::ordered_json(*c.tau) : nlohmann::ordered_json("auto");
  j["u"] = 0.5;
  j["a"] = 0.5;
  j["max_outer"] = c.max_outer;
  j["outer_tol"] = c.outer_tol;
  j["center_features"] = true;
  j["seed"] = c.seed;
  j["prevalence_threshold"] =
      c.prevalence_threshold ? nlohmann::ordered_json(*c.prevalence_threshold) : nlohmann::ordered_json(nullptr);
  j["relative_abundance"] = c.relative_abundance;
  if (c.command == "project") {
    j["subsample_m"] = c.subsample_m ? nlohmann::ordered_json(*c.subsample_m) : nlohmann::ordered_json(nullptr);
    j["full_pcoa"] = c.full_pcoa;
  }
  if (c.command == "simulate") {
    j["scenario"] = c.scenario;
    j["replicates"] = c.replicates;
  }
  return j;
}

inline BspcoaConfig bspcoa_config(const RunConfig &c) {
  BspcoaConfig cfg;
  cfg.k = c.k;
  cfg.mcmc_iters = c.iters;
  cfg.burn_in = c.burn_in;
  cfg.ci_level = c.ci_level;
  cfg.max_outer = c.max_outer;
  cfg.outer_tol = c.outer_tol;
  cfg.seed = c.seed;
  if (c.tau) {
    cfg.auto_tau = false;
    cfg.hyper.tau = *c.tau;
  }
  cfg.validate();
  return cfg;
}

namespace detail {

/// Creates the directory if needed and refuses to clobber existing outputs.
inline void prepare_output_dir(const RunConfig &c, const std::vector<std::string> &files) {
  if (c.output_dir.empty()) throw UsageError("--output-dir is required for '" + c.command + "'");
  std::filesystem::create_directories(c.output_dir);
  if (c.force) return;
  for (const auto &f : files)
    if (std::filesystem::exists(c.output_dir / f))
      throw UsageError("refusing to overwrite " + (c.output_dir / f).string() + " (pass --force)");
}

struct PreparedInput {
  FeatureMatrix table;
  std::vector<std::string> dropped;
};

/// Filter by prevalence, then convert to relative abundances, as requested.
/// Negative cells are accepted only for the Euclidean distance.
inline PreparedInput prepare_input(const RunConfig &c) {
  if (c.input.empty()) throw UsageError("--input is required for '" + c.command + "'");
  PreparedInput out;
  const bool counts = parse_distance_kind(c.distance) != DistanceKind::euclidean;
  out.table = read_table(c.input, TableReadOptions{c.delimiter, counts});
  if (c.prevalence_threshold) {
    auto filtered = prevalence_filter(out.table, *c.prevalence_threshold);
    std::cerr << "prevalence filter: dropped " << filtered.dropped.size() << " of " << out.table.cols()
              << " taxa\n";
    out.table = std::move(filtered.table);
    out.dropped = std::move(filtered.dropped);
  }
  if (c.relative_abundance) out.table.values = relative_abundance(out.table.values);
  out.table.validate();
  return out;
}

/// Integer group codes in order of first appearance, aligned with `ids`.
inline std::vector<int> read_groups(const std::filesystem::path &path, const std::vector<std::string> &ids,
                                    char delimiter) {
  const TextTable t = read_text_table(path, delimiter);
  if (t.header.size() < 2) throw DataError(path.string() + ": groups table needs sample_id and group columns");
  std::map<std::string, std::string> by_id;
  for (const auto &row : t.rows) by_id[row[0]] = row[1];
  std::map<std::string, int> code;
  std::vector<int> out;
  for (const auto &id : ids) {
    const auto it = by_id.find(id);
    if (it == by_id.end()) throw DataError(path.string() + ": no group for sample '" + id + "'");
    const auto [c, inserted] = code.emplace(it->second, static_cast<int>(code.size()));
    out.push_back(c->second);
  }
  return out;
}

inline std::vector<std::string> axis_header(const char *prefix, Index k) {
  std::vector<std::string> h;
  for (Index r = 1; r <= k; ++r) h.push_back(std::string(prefix) + std::to_string(r));
  return h;
}

inline std::string coordinates_csv(const nlohmann::ordered_json &config, const std::vector<std::string> &ids,
                                   const MatrixXd *pcoa_coords, const MatrixXd &surrogate) {
  CsvWriter w(config);
  std::vector<std::string> header{"sample_id"};
  if (pcoa_coords)
    for (auto &h : axis_header("pcoa_", pcoa_coords->cols())) header.push_back(h);
  for (auto &h : axis_header("bspcoa_", surrogate.cols())) header.push_back(h);
  w.row(header);
  for (Index i = 0; i < surrogate.rows(); ++i) {
    std::vector<std::string> cells{ids[static_cast<std::size_t>(i)]};
    if (pcoa_coords)
      for (Index r = 0; r < pcoa_coords->cols(); ++r) cells.push_back(format_number((*pcoa_coords)(i, r)));
    for (Index r = 0; r < surrogate.cols(); ++r) cells.push_back(format_number(surrogate(i, r)));
    w.row(cells);
  }
  return w.str();
}

inline std::string loadings_csv(const nlohmann::ordered_json &config, const std::vector<std::string> &taxa,
                                const SurrogateFit &f) {
  CsvWriter w(config);
  w.row({"taxon", "axis", "estimate", "ci_lower", "ci_upper", "selected"});
  for (Index j = 0; j < f.B_hat.rows(); ++j)
    for (Index r = 0; r < f.B_hat.cols(); ++r)
      w.row({taxa[static_cast<std::size_t>(j)], std::to_string(r + 1), format_number(f.B_hat(j, r)),
             format_number(f.ci_lower(j, r)), format_number(f.ci_upper(j, r)), f.B_hat(j, r) != 0.0 ? "1" : "0"});
  return w.str();
}

inline nlohmann::ordered_json fit_json(const SurrogateFit &f, const std::vector<std::string> &taxa) {
  nlohmann::ordered_json j;
  j["tau"] = f.tau;
  j["outer_iterations"] = f.outer_iters_used;
  j["converged"] = f.converged;
  j["delta_trace"] = f.trace;
  j["n_selected_taxa"] = f.n_selected();
  std::vector<std::string> sel;
  for (std::size_t i = 0; i < f.selected_rows.size(); ++i)
    if (f.selected_rows[i]) sel.push_back(taxa[i]);
  j["selected_taxa"] = sel;
  return j;
}

inline nlohmann::ordered_json pcoa_json(const PcoaResult &p) {
  nlohmann::ordered_json j;
  j["k"] = p.k();
  j["eigenvalues"] = std::vector<double>(p.eigenvalues.data(), p.eigenvalues.data() + p.k());
  j["positive_count"] = p.positive_count;
  j["positive_mass"] = p.positive_mass();
  j["eig_tol"] = p.eig_tol;
  return j;
}

inline nlohmann::ordered_json header_json(const RunConfig &c) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = c.command;
  j["seed"] = c.seed;
  j["config"] = config_json(c);
  return j;
}

inline std::string dump(const nlohmann::ordered_json &j) { return j.dump(2) + "\n"; }

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Silhouette and best-matched accuracy for both embeddings when groups are known.
inline void score_groups(DiagnosticsReport &r, const std::vector<int> &groups, const MatrixXd &pcoa_coords,
                         const MatrixXd &surrogate, std::uint64_t seed) {
  if (groups.empty() || pcoa_coords.cols() < 2) return;
  Rng rng = Rng(seed).split(0x5C0E);
  const MatrixXd z2 = pcoa_coords.leftCols(2), s2 = surrogate.leftCols(2);
  const bool two = *std::max_element(groups.begin(), groups.end()) == 1;
  r.silhouette_2d_pcoa = silhouette_2d(z2, groups);
  if (two) r.bm_acc_pcoa = bm_acc(groups, z2, 10, rng);
  if ((s2.rowwise() - s2.row(0)).cwiseAbs().maxCoeff() > 0.0) {
    r.silhouette_2d = silhouette_2d(s2, groups);
    if (two) r.bm_acc = bm_acc(groups, s2, 10, rng);
  }
}

inline std::string ordination_plot(const PcoaResult &p, const MatrixXd &surrogate, const std::vector<int> &groups) {
  const auto label = [&](Index r) {
    return "Axis " + std::to_string(r + 1) + " (" + fmt2(100.0 * p.var_explained(r)) + "%)";
  };
  std::vector<ScatterPanel> panels;
  panels.push_back({"PCoA", p.coordinates, label(0), label(1)});
  panels.push_back({"BSPCoA", surrogate, "Surrogate axis 1", "Surrogate axis 2"});
  return ordination_svg(panels, groups);
}

} // namespace detail

inline int cmd_fit(const RunConfig &c) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::string> files{"coordinates.csv", "loadings.csv", "diagnostics.json", "timings.json"};
  std::vector<std::string> all_files = files;
  if (c.plot) all_files.insert(all_files.end(), {"ordination.svg", "loadings_heatmap.svg"});
  const BspcoaConfig cfg = bspcoa_config(c);
  const DistanceKind kind = parse_distance_kind(c.distance);
  const auto input = detail::prepare_input(c);
  detail::prepare_output_dir(c, all_files);
  const FeatureMatrix &X = input.table;
  std::vector<int> groups;
  if (!c.groups.empty()) groups = detail::read_groups(c.groups, X.row_ids, c.delimiter);
  const double t_ingest = detail::seconds_since(t0);

  const auto t1 = std::chrono::steady_clock::now();
  const DistanceMatrix D = compute_distance(kind, X);
  const SurrogateFit f = fit(X, D, cfg);
  const double t_fit = detail::seconds_since(t1);

  const MatrixXd Xw = X.values.rowwise() - f.column_means;
  DiagnosticsReport report = diagnose(f.B_hat, Xw, f.pcoa);
  detail::score_groups(report, groups, f.pcoa.coordinates, f.coordinates, c.seed);

  const nlohmann::ordered_json config = config_json(c);
  nlohmann::ordered_json diag = detail::header_json(c);
  diag["input"] = {{"n_samples", X.rows()}, {"n_taxa", X.cols()}, {"dropped_taxa", input.dropped}};
  diag["pcoa"] = detail::pcoa_json(f.pcoa);
  diag["fit"] = detail::fit_json(f, X.col_ids);
  diag["diagnostics"] = to_json(report);
  diag["warnings"] = f.warnings;

  std::map<std::string, std::string> out;
  out["coordinates.csv"] = detail::coordinates_csv(config, X.row_ids, &f.pcoa.coordinates, f.coordinates);
  out["loadings.csv"] = detail::loadings_csv(config, X.col_ids, f);
  out["diagnostics.json"] = detail::dump(diag);
  if (c.plot) {
    out["ordination.svg"] = detail::ordination_plot(f.pcoa, f.coordinates, groups);
    MatrixXd unit = MatrixXd::Zero(f.B_hat.rows(), f.B_hat.cols());
    if (f.B_hat.maxCoeff() > f.B_hat.minCoeff()) unit = rescale_loadings(f.B_hat);
    else std::cerr << "warning: loadings are constant; heatmap drawn blank\n";
    out["loadings_heatmap.svg"] = heatmap_svg(unit, X.col_ids, "Rescaled loadings");
  }
  nlohmann::ordered_json timings = detail::header_json(c);
  timings["seconds"] = {{"ingest", t_ingest}, {"distance_and_fit", t_fit}, {"total", detail::seconds_since(t0)}};
  out["timings.json"] = detail::dump(timings);

  for (const auto &w : f.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto &[name, content] : out) write_file(c.output_dir / name, content);
  return 0;
}

inline int cmd_project(const RunConfig &c) {
  const auto t0 = std::chrono::steady_clock::now();
  const BspcoaConfig cfg = bspcoa_config(c);
  const DistanceKind kind = parse_distance_kind(c.distance);
  const auto input = detail::prepare_input(c);
  detail::prepare_output_dir(c, {"coordinates.csv", "loadings.csv", "diagnostics.json", "timings.json"});
  const FeatureMatrix &X = input.table;
  const Index m = c.subsample_m.value_or(std::min<Index>(X.rows(), 100));

  Rng subsample_rng = Rng(c.seed).split(0x5AB5);
  const SubsampleProjection proj = subsample_fit_project(X, cfg, m, kind, subsample_rng);

  std::optional<PcoaResult> full;
  double t_full = 0.0;
  if (c.full_pcoa) {
    const auto t1 = std::chrono::steady_clock::now();
    full = pcoa(compute_distance(kind, X), cfg.k);
    t_full = detail::seconds_since(t1);
  }

  const nlohmann::ordered_json config = config_json(c);
  nlohmann::ordered_json diag = detail::header_json(c);
  diag["input"] = {{"n_samples", X.rows()}, {"n_taxa", X.cols()}, {"dropped_taxa", input.dropped}};
  std::vector<std::string> sub_ids;
  for (Index i : proj.indices) sub_ids.push_back(X.row_ids[static_cast<std::size_t>(i)]);
  diag["subsample"] = {{"m", m}, {"sample_ids", sub_ids}};
  diag["pcoa_subsample"] = detail::pcoa_json(proj.fit.pcoa);
  diag["fit"] = detail::fit_json(proj.fit, X.col_ids);
  diag["warnings"] = proj.fit.warnings;

  nlohmann::ordered_json timings = detail::header_json(c);
  timings["seconds"] = {{"full_pcoa", full ? nlohmann::ordered_json(t_full) : nlohmann::ordered_json(nullptr)},
                        {"subsample_fit", proj.seconds_subsample_fit},
                        {"projection", proj.seconds_projection},
                        {"total", detail::seconds_since(t0)}};

  write_file(c.output_dir / "coordinates.csv",
             detail::coordinates_csv(config, X.row_ids, full ? &full->coordinates : nullptr, proj.full_coords));
  write_file(c.output_dir / "loadings.csv", detail::loadings_csv(config, X.col_ids, proj.fit));
  write_file(c.output_dir / "diagnostics.json", detail::dump(diag));
  write_file(c.output_dir / "timings.json", detail::dump(timings));
  return 0;
}

/// Method rows per replicate (PCoA, BSPCoA), then mean and sd rows per method.
inline std::string results_csv(const nlohmann::ordered_json &config, const std::vector<ReplicateMetrics> &rows) {
  CsvWriter w(config);
  w.row({"Method", "var.PC1", "var.PC2", "Silhouette_2D", "delta_res", "BM-ACC", "ExI"});
  const auto emit = [&](const std::string &name, const MethodMetrics &m) {
    w.row({name, format_number(m.var_pc1), format_number(m.var_pc2), format_number(m.silhouette),
           format_number(m.delta_res), format_number(m.bm_acc), format_number(m.exi)});
  };
  std::vector<MethodMetrics> pc, bs;
  for (const auto &r : rows) {
    emit("PCoA", r.pcoa);
    emit("BSPCoA", r.bspcoa);
    pc.push_back(r.pcoa);
    bs.push_back(r.bspcoa);
  }
  const MetricSummary sp = summarize(pc), sb = summarize(bs);
  emit("PCoA mean", sp.mean);
  emit("PCoA sd", sp.sd);
  emit("BSPCoA mean", sb.mean);
  emit("BSPCoA sd", sb.sd);
  return w.str();
}

inline int cmd_simulate(const RunConfig &c) {
  const Scenario scenario = parse_scenario(c.scenario);
  if (c.replicates < 1) throw UsageError("--replicates must be at least 1");
  detail::prepare_output_dir(c, {"results.csv"});
  StudyOptions opt;
  opt.scenario = scenario;
  opt.spec = scenario_spec(scenario);
  opt.replicates = c.replicates;
  opt.cfg = bspcoa_config(c);
  opt.features = c.relative_abundance ? SurrogateFeatures::relative_abundance : SurrogateFeatures::counts;
  opt.seed = c.seed;
  opt.threads = c.threads;
  const auto rows = run_study(opt);
  const std::string csv = results_csv(config_json(c), rows);
  write_file(c.output_dir / "results.csv", csv);
  return 0;
}

namespace detail {

/// Loadings as p x k aligned with `taxa`: the long loadings.csv layout
/// (taxon, axis, estimate, ...) or a wide table with taxa as rows.
inline MatrixXd read_loadings(const std::filesystem::path &path, const std::vector<std::string> &taxa, char delim) {
  const TextTable t = read_text_table(path, delim);
  std::map<std::string, Index> index;
  for (std::size_t j = 0; j < taxa.size(); ++j) index[taxa[j]] = static_cast<Index>(j);
  const auto locate = [&](const std::string &taxon, std::size_t line) {
    const auto it = index.find(taxon);
    if (it == index.end())
      throw DataError(path.string() + ":" + std::to_string(line) + ": taxon '" + taxon + "' is not in the input table");
    return it->second;
  };
  const bool long_form = t.header.size() >= 3 && t.header[0] == "taxon" && t.header[1] == "axis" &&
                         t.header[2] == "estimate";
  if (long_form) {
    Index k = 0;
    std::vector<std::tuple<Index, Index, double>> entries;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      const std::string loc = path.string() + ":" + std::to_string(t.line_numbers[i]);
      const Index j = locate(t.rows[i][0], t.line_numbers[i]);
      const double axis = parse_number(t.rows[i][1], loc + ", column 2");
      if (axis < 1 || axis != std::floor(axis)) throw DataError(loc + ": axis must be a positive integer");
      const double v = parse_number(t.rows[i][2], loc + ", column 3");
      k = std::max(k, static_cast<Index>(axis));
      entries.emplace_back(j, static_cast<Index>(axis) - 1, v);
    }
    MatrixXd B = MatrixXd::Zero(static_cast<Index>(taxa.size()), k);
    for (const auto &[j, r, v] : entries) B(j, r) = v;
    return B;
  }
  const FeatureMatrix wide = read_table(path, TableReadOptions{delim, false});
  MatrixXd B = MatrixXd::Zero(static_cast<Index>(taxa.size()), wide.cols());
  for (Index i = 0; i < wide.rows(); ++i)
    B.row(locate(wide.row_ids[static_cast<std::size_t>(i)], 0)) = wide.values.row(i);
  return B;
}

/// Reference coordinates aligned with `ids`; uses the pcoa_* columns when present.
inline MatrixXd read_reference(const std::filesystem::path &path, const std::vector<std::string> &ids, char delim) {
  const FeatureMatrix t = read_table(path, TableReadOptions{delim, false});
  std::vector<Index> cols;
  for (std::size_t c = 0; c < t.col_ids.size(); ++c)
    if (t.col_ids[c].rfind("pcoa_", 0) == 0) cols.push_back(static_cast<Index>(c));
  if (cols.empty())
    for (Index c = 0; c < t.cols(); ++c) cols.push_back(c);
  std::map<std::string, Index> row;
  for (std::size_t i = 0; i < t.row_ids.size(); ++i) row[t.row_ids[i]] = static_cast<Index>(i);
  MatrixXd Z(static_cast<Index>(ids.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto it = row.find(ids[i]);
    if (it == row.end()) throw DataError(path.string() + ": no coordinates for sample '" + ids[i] + "'");
    for (std::size_t c = 0; c < cols.size(); ++c) Z(static_cast<Index>(i), static_cast<Index>(c)) = t.values(it->second, cols[c]);
  }
  return Z;
}

} // namespace detail

/// delta, ExI and the best-achievable delta* for user-supplied B and Z.
inline int cmd_diagnose(const RunConfig &c) {
  if (c.loadings.empty() || c.coordinates.empty())
    throw UsageError("diagnose needs --loadings and --coordinates");
  if (!c.output_dir.empty()) detail::prepare_output_dir(c, {"diagnostics.json"});
  const auto input = detail::prepare_input(c);
  const FeatureMatrix &X = input.table;
  const MatrixXd Xw = center_columns(X.values).values;
  const MatrixXd B = detail::read_loadings(c.loadings, X.col_ids, c.delimiter);
  const MatrixXd Z = detail::read_reference(c.coordinates, X.row_ids, c.delimiter);
  if (B.cols() != Z.cols())
    throw DataError("loadings have " + std::to_string(B.cols()) + " axes but coordinates have " +
                    std::to_string(Z.cols()));

  nlohmann::ordered_json j = detail::header_json(c);
  j["input"] = {{"n_samples", X.rows()}, {"n_taxa", X.cols()}, {"dropped_taxa", input.dropped}};
  nlohmann::ordered_json d;
  d["delta_B"] = delta(B, Xw, Z);
  d["exi_B"] = (Xw * B).norm() > 0.0 ? nlohmann::ordered_json(exi(B, Xw, Z)) : nlohmann::ordered_json(nullptr);
  const BestSurrogate best = delta_star(Xw, Z);
  d["delta_star"] = best.delta_star;
  d["exi_star"] = (Xw * best.B_star).norm() > 1e-14 * Z.norm() ? exi(best.B_star, Xw, Z) : 0.0;
  int selected = 0;
  for (Index r = 0; r < B.rows(); ++r) selected += B.row(r).cwiseAbs().maxCoeff() > 0.0 ? 1 : 0;
  d["n_selected_taxa"] = selected;
  j["diagnostics"] = d;
  const std::string text = detail::dump(j);
  if (!c.output_dir.empty()) write_file(c.output_dir / "diagnostics.json", text);
  std::cout << text;
  return 0;
}

inline int dispatch(const RunConfig &c) {
  if (c.command == "fit") return cmd_fit(c);
  if (c.command == "simulate") return cmd_simulate(c);
  if (c.command == "project") return cmd_project(c);
  if (c.command == "diagnose") return cmd_diagnose(c);
  throw UsageError("unknown subcommand '" + c.command + "' (valid: fit, simulate, project, diagnose)");
}

/// Runs `body`, mapping failures to the exit-code contract.
inline int run_guarded(const std::function<int()> &body, std::ostream &err = std::cerr) {
  try {
    return body();
  } catch (const UsageError &e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const DataError &e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error &e) {
    err << "data error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError &e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  }
}

} // namespace bspcoa
