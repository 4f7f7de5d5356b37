#include "mdisc/cli/commands.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <optional>
#include <sstream>
#include <variant>

#include "mdisc/cli/manifest.hpp"
#include "mdisc/convexity.hpp"
#include "mdisc/errors.hpp"
#include "mdisc/geometry.hpp"
#include "mdisc/hull.hpp"
#include "mdisc/oracle.hpp"
#include "mdisc/simulator.hpp"
#include "mdisc/strategies.hpp"

namespace mdisc::cli {

namespace {

using Json = nlohmann::ordered_json;
using Cell = std::variant<double, std::uint64_t, std::string>;

constexpr double kThetaSnap = 5e-5;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> comments;  ///< extra "# ..." lines after the header comment
};

/// Body of one run plus its exit status.
struct Rendered {
  std::string body;
  int status = kExitOk;
  std::string diagnostic;
};

struct Common {
  std::string out;
  std::string format;
  std::uint64_t seed = 1;
  bool degrees = false;
};

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return std::to_string(*u);
  return std::get<std::string>(c);
}

Json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? Json(*d) : Json(nullptr);
  if (const auto* u = std::get_if<std::uint64_t>(&c)) return Json(*u);
  return Json(std::get<std::string>(c));
}

std::string header_line(const RunManifest& m) {
  return "# mdisc " + m.version + " manifest=" + hex64(m.checksum()) + "\n";
}

std::string render_csv(const Table& t, const RunManifest& m) {
  std::string s = header_line(m);
  for (const auto& c : t.comments) s += "# " + c + "\n";
  for (std::size_t j = 0; j < t.columns.size(); ++j) s += (j ? "," : "") + t.columns[j];
  s += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) s += ",";
      s += cell_text(row[j]);
    }
    s += "\n";
  }
  return s;
}

Json json_envelope(const RunManifest& m) {
  Json j;
  j["mdisc_version"] = m.version;
  j["manifest"] = hex64(m.checksum());
  j["command"] = m.command;
  return j;
}

Json table_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json r;
    for (std::size_t j = 0; j < row.size(); ++j) r[t.columns[j]] = cell_json(row[j]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string render(const Table& t, const RunManifest& m, const std::string& format, const Json& summary) {
  if (format == "csv") return render_csv(t, m);
  Json j = json_envelope(m);
  if (!summary.is_null()) j["summary"] = summary;
  j["rows"] = table_json(t);
  return j.dump(2) + "\n";
}

Json matrix_json(const Mat2& a) { return Json::array({Json::array({a(0, 0), a(0, 1)}), Json::array({a(1, 0), a(1, 1)})}); }

RunManifest base_manifest(const std::string& command, const Common& common) {
  RunManifest m;
  m.command = command;
  m.seed = common.seed;
  m.version = std::string(version());
  return m;
}

// curves ---------------------------------------------------------------------

struct CurvesArgs {
  double theta = 0.0;
  std::string pi_grid = "auto";
};

Rendered cmd_curves(const CurvesArgs& a, const Common& common, RunManifest& m) {
  const double theta = resolve_theta(a.theta, common.degrees);
  const MeasurementPair pair = measurement_pair(theta);
  std::string grid_spec = a.pi_grid;
  if (grid_spec == "auto") {
    const double c = pair.c();
    grid_spec = c > 0.0 ? "0:" + format_exact(c) + ":" + format_exact(c / 100.0) : "0:0:1";
  }
  m.params = {{"theta", format_exact(theta)}, {"pi-grid", grid_spec}, {"format", common.format}};
  const CurveTable ct = curve_table(theta, parse_grid(grid_spec));

  Table t;
  t.columns = {"p_inc", "ps_entangled", "ps_single_optimal", "ps_single_pure", "pts_entangled", "pts_single",
               "advantage"};
  Json strategies = Json::array();
  for (const auto& r : ct.rows) {
    t.rows.push_back({r.p_inc, r.ps_entangled, r.ps_single_optimal, r.ps_single_pure, r.pts_entangled, r.pts_single,
                      r.advantage});
    strategies.push_back(r.strategy);
  }
  Rendered out;
  if (common.format == "csv") {
    out.body = render_csv(t, m);
  } else {
    Json j = json_envelope(m);
    j["theta"] = theta;
    j["rows"] = table_json(t);
    for (std::size_t k = 0; k < ct.rows.size(); ++k) j["rows"][k]["single_strategy"] = strategies[k];
    out.body = j.dump(2) + "\n";
  }
  return out;
}

// hull -----------------------------------------------------------------------

struct HullArgs {
  double c = 0.0;
  std::size_t samples = 10000;
};

std::string kind_name(SampleKind k) {
  switch (k) {
    case SampleKind::CurveGrid: return "sample_curve";
    case SampleKind::RandomProbe: return "sample_random";
    case SampleKind::Refinement: return "sample_refine";
  }
  return "sample";
}

Rendered cmd_hull(const HullArgs& a, const Common& common, RunManifest& m) {
  m.params = {{"c", format_exact(a.c)}, {"samples", std::to_string(a.samples)}, {"format", common.format}};
  const HullReport rep = hull_verify(a.c, a.samples, common.seed);

  Table t;
  t.columns = {"kind", "p_inc", "p_success"};
  auto add = [&t](const std::string& kind, const PlanePoint& p) { t.rows.push_back({kind, p.x, p.y}); };
  add("A", rep.point_a);
  if (rep.point_t) add("T", *rep.point_t);
  add("U", rep.point_u);
  if (rep.numeric_tangency) add("T_numeric", *rep.numeric_tangency);
  for (const auto& v : rep.hull) add("hull", v);
  for (const auto& s : rep.samples) add(kind_name(s.kind), s.point);

  const bool breach = rep.max_deviation > kHullTolerance || rep.tangency_error > kHullTolerance;
  t.comments.push_back("c=" + format_number(rep.c) + " samples=" + std::to_string(rep.n_samples) +
                       " degenerate=" + (rep.degenerate ? "true" : "false") +
                       " hull_vertices=" + std::to_string(rep.hull.size()));
  t.comments.push_back("max_deviation=" + format_number(rep.max_deviation) +
                       " tangency_error=" + format_number(rep.tangency_error) +
                       " tolerance=" + format_number(kHullTolerance) + " pass=" + (breach ? "false" : "true"));

  Json summary;
  summary["c"] = rep.c;
  summary["samples"] = rep.n_samples;
  summary["degenerate"] = rep.degenerate;
  summary["max_deviation"] = rep.max_deviation;
  summary["tangency_error"] = rep.tangency_error;
  summary["tolerance"] = kHullTolerance;
  summary["hull_vertices"] = rep.hull.size();
  summary["pass"] = !breach;

  Rendered out;
  out.body = render(t, m, common.format, summary);
  if (breach) {
    out.status = kExitThreshold;
    out.diagnostic = "hull deviation " + format_number(rep.max_deviation) + " or tangency error " +
                     format_number(rep.tangency_error) + " exceeds " + format_number(kHullTolerance);
  }
  return out;
}

// convexity --------------------------------------------------------------------

struct ConvexityArgs {
  std::string c_grid = "0.05:0.95:0.05";
  std::string pi_grid = "auto";
  int pi_points = 30;
  int concave_points = 10;
  double h = kSecondDerivativeStep;
  std::string branch = "auto";
};

double analytic_or_nan(double c, double p, Branch b) {
  try {
    return b == Branch::Convex ? second_derivative(c, p).d2PS_dPI2 : concave_second_derivative(c, p);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v;
  if (n == 1) return {lo};
  for (int j = 0; j < n; ++j) v.push_back(j == n - 1 ? hi : lo + (hi - lo) * j / (n - 1));
  return v;
}

Rendered cmd_convexity(const ConvexityArgs& a, const Common& common, RunManifest& m) {
  if (!(a.h > 0.0 && a.h < 0.01)) throw ValidationError("--step must lie in (0, 0.01)");
  if (a.pi_points < 1 || a.concave_points < 0) throw ValidationError("point counts must be positive");
  m.params = {{"c-grid", a.c_grid},
              {"pi-grid", a.pi_grid},
              {"pi-points", std::to_string(a.pi_points)},
              {"concave-points", std::to_string(a.concave_points)},
              {"step", format_exact(a.h)},
              {"branch", a.branch},
              {"format", common.format}};

  const std::vector<double> cs = parse_grid(a.c_grid);
  std::optional<Branch> forced;
  if (a.branch == "convex") forced = Branch::Convex;
  else if (a.branch == "concave") forced = Branch::Concave;
  else if (a.branch != "auto") throw ValidationError("--branch must be auto, convex or concave");
  std::optional<std::vector<double>> explicit_grid;
  if (a.pi_grid != "auto") explicit_grid = parse_grid(a.pi_grid);

  Table t;
  t.columns = {"c", "p_inc", "d2_analytic", "d2_numeric", "rel_err", "branch"};
  double worst_convex = std::numeric_limits<double>::infinity();
  double worst_concave = -std::numeric_limits<double>::infinity();
  double worst_rel = 0.0;
  std::size_t boundary_rows = 0;

  for (double c : cs) {
    if (!(c > 0.0 && c < 1.0)) throw DomainError("convexity needs 0 < c < 1");
    const double pib = boundary_PIB(c);
    const double p_end = 0.5 * (1.0 + c * c);
    std::vector<double> ps;
    if (explicit_grid) {
      ps = *explicit_grid;
    } else {
      ps = linspace(1e-3, pib - 1e-3, a.pi_points);
      for (int k = 1; k <= a.concave_points; ++k) ps.push_back(pib + (p_end - pib) * k / a.concave_points);
    }
    for (double p : ps) {
      if (!(p >= 0.0 && p <= p_end)) {
        throw DomainError("P_I=" + format_number(p) + " outside [0, (1+c^2)/2] for c=" + format_number(c));
      }
      FiniteDifferenceCheck fd{};
      std::string label;
      bool full = true;
      if (forced) {
        fd = finite_difference_check(c, p, a.h, forced);
        label = std::string(to_string(fd.branch));
      } else {
        try {
          fd = finite_difference_check(c, p, a.h);
          label = std::string(to_string(fd.branch));
        } catch (const DomainError&) {
          full = false;
          ++boundary_rows;
          label = "boundary";
          fd.branch = p < pib ? Branch::Convex : Branch::Concave;
          fd.analytic = analytic_or_nan(c, p, fd.branch);
          fd.numeric = fd.rel_err = std::numeric_limits<double>::quiet_NaN();
        }
      }
      t.rows.push_back({c, p, fd.analytic, fd.numeric, fd.rel_err, label});
      if (full) worst_rel = std::max(worst_rel, fd.rel_err);
      if (std::isnan(fd.analytic)) continue;
      if (fd.branch == Branch::Convex) {
        worst_convex = std::min(worst_convex, fd.analytic);
      } else {
        worst_concave = std::max(worst_concave, fd.analytic);
      }
    }
  }

  const bool breach = worst_convex < -1e-9 || worst_rel > 1e-3 || worst_concave >= 0.0;
  t.comments.push_back("min_convex_d2=" + format_number(worst_convex) + " max_concave_d2=" +
                       format_number(worst_concave) + " max_rel_err=" + format_number(worst_rel) +
                       " boundary_rows=" + std::to_string(boundary_rows) + " pass=" + (breach ? "false" : "true"));
  Json summary;
  summary["min_convex_d2"] = std::isfinite(worst_convex) ? Json(worst_convex) : Json(nullptr);
  summary["max_concave_d2"] = std::isfinite(worst_concave) ? Json(worst_concave) : Json(nullptr);
  summary["max_rel_err"] = worst_rel;
  summary["boundary_rows"] = boundary_rows;
  summary["pass"] = !breach;

  Rendered out;
  out.body = render(t, m, common.format, summary);
  if (breach) {
    out.status = kExitThreshold;
    out.diagnostic = "convexity check failed: min convex d2 " + format_number(worst_convex) + ", max rel err " +
                     format_number(worst_rel);
  }
  return out;
}

// oracle -----------------------------------------------------------------------

struct OracleArgs {
  double theta = 0.0;
  double pi = 0.0;
  std::string method = "ascent";
  double tol = 1e-4;
  int restarts = 20;
  int grid_resolution = 180;
};

Rendered cmd_oracle(const OracleArgs& a, const Common& common, RunManifest& m) {
  const double theta = resolve_theta(a.theta, common.degrees);
  OracleOptions opt;
  opt.method = parse_oracle_method(a.method);
  opt.tol = a.tol;
  opt.seed = common.seed;
  opt.restarts = a.restarts;
  opt.grid_resolution = a.grid_resolution;
  if (!(opt.tol > 0.0)) throw ValidationError("--tol must be positive");
  if (opt.restarts < 1) throw ValidationError("--restarts must be >= 1");
  m.params = {{"theta", format_exact(theta)},
              {"pi", format_exact(a.pi)},
              {"method", std::string(to_string(opt.method))},
              {"tol", format_exact(opt.tol)},
              {"restarts", std::to_string(opt.restarts)},
              {"grid-resolution", std::to_string(opt.grid_resolution)},
              {"format", common.format}};

  const MeasurementPair pair = measurement_pair(theta);
  const OracleResult res = optimize_povm(pair, a.pi, opt);
  const double closed = entangled_success(theta, a.pi).p_success;
  const double gap = std::abs(res.point.p_success - closed);

  Rendered out;
  if (common.format == "csv") {
    Table t;
    t.columns = {"theta", "pi_target", "method", "p_success", "p_error", "p_inconclusive", "closed_form_p_success",
                 "gap", "converged", "agreeing_restarts"};
    t.rows.push_back({theta, a.pi, std::string(to_string(opt.method)), res.point.p_success, res.point.p_error,
                      res.point.p_inconclusive, closed, gap, std::string(res.certified ? "true" : "false"),
                      static_cast<std::uint64_t>(res.agreeing_restarts)});
    out.body = render_csv(t, m);
  } else {
    Json j = json_envelope(m);
    j["theta"] = theta;
    j["pi_target"] = a.pi;
    j["method"] = to_string(opt.method);
    j["p_success"] = res.point.p_success;
    j["p_error"] = res.point.p_error;
    j["p_inconclusive"] = res.point.p_inconclusive;
    j["closed_form_p_success"] = closed;
    j["gap"] = gap;
    j["tol"] = opt.tol;
    j["converged"] = res.certified;
    j["blocks"] = {{"H_M", matrix_json(res.blocks.h_m)},
                   {"H_N", matrix_json(res.blocks.h_n)},
                   {"H_I", matrix_json(res.blocks.h_i)}};
    Json stats;
    stats["agreeing_restarts"] = res.agreeing_restarts;
    if (opt.method == OracleMethod::Ascent) {
      stats["restarts"] = res.restart_success.size();
      stats["restart_success"] = res.restart_success;
      if (!res.restart_success.empty()) {
        const auto [lo, hi] = std::minmax_element(res.restart_success.begin(), res.restart_success.end());
        stats["min"] = *lo;
        stats["max"] = *hi;
      }
    } else {
      stats["candidates"] = res.candidates;
    }
    j["restart_statistics"] = stats;
    out.body = j.dump(2) + "\n";
  }

  if (!res.certified) {
    out.status = kExitNonConvergence;
    out.diagnostic = "oracle did not converge: " + std::to_string(res.agreeing_restarts) + " agreeing restarts";
  } else if (gap > opt.tol) {
    out.status = kExitThreshold;
    out.diagnostic = "oracle gap " + format_number(gap) + " exceeds tol " + format_number(opt.tol);
  }
  return out;
}

// simulate -----------------------------------------------------------------------

struct SimulateArgs {
  std::string mode = "intermediate";
  std::string theta_list = "paper";
  std::string t_grid = "auto";
  std::uint64_t trials = 1000000;
  std::string noise = "ideal";
  bool feed_forward = true;
};

std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> v;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), x);
    if (ec != std::errc{} || ptr != item.data() + item.size()) throw ValidationError("bad number in list: " + item);
    v.push_back(x);
  }
  if (v.empty()) throw ValidationError("empty list");
  return v;
}

Rendered cmd_simulate(const SimulateArgs& a, const Common& common, RunManifest& m) {
  if (a.mode != "intermediate" && a.mode != "unambiguous") {
    throw ValidationError("--mode must be intermediate or unambiguous");
  }
  if (a.trials < 1) throw ValidationError("--trials must be >= 1");
  const bool unambiguous = a.mode == "unambiguous";
  const ImperfectionModel noise = load_noise_config(a.noise);
  const std::string t_grid = a.t_grid != "auto" ? a.t_grid : unambiguous ? "0:1:0.1" : "1:0.1:-0.1";
  const std::vector<double> ts = parse_grid(t_grid);

  std::vector<double> thetas;
  std::string theta_spec;
  if (!unambiguous) {
    if (a.theta_list == "paper") {
      thetas = default_scan_thetas();
    } else {
      for (double v : parse_list(a.theta_list)) thetas.push_back(resolve_theta(v, common.degrees));
    }
    for (double th : thetas) theta_spec += (theta_spec.empty() ? "" : ",") + format_exact(th);
  }

  m.params = {{"mode", a.mode}};
  if (!unambiguous) m.params.emplace_back("theta-list", theta_spec);
  m.params.emplace_back("t-grid", t_grid);
  m.params.emplace_back("trials", std::to_string(a.trials));
  m.params.emplace_back("noise", a.noise);
  m.params.emplace_back("feed-forward", a.feed_forward ? "true" : "false");
  m.params.emplace_back("format", common.format);

  ScanTable scan;
  if (unambiguous) {
    if (!a.feed_forward) throw ValidationError("unambiguous mode requires feed-forward");
    scan = scan_unambiguous(ts, a.trials, common.seed, noise);
  } else {
    scan = scan_intermediate(thetas, ts, a.trials, common.seed, noise, a.feed_forward);
  }

  Table t;
  t.columns = {"theta", "transmittance", "p_success", "p_error", "p_inconclusive", "se_success", "se_error",
               "se_inconclusive", "relative_success", "se_relative", "predicted_p_success",
               "predicted_p_inconclusive", "optimal_p_success", "error_coincidences", "coincidences"};
  double max_pe = 0.0;
  std::uint64_t error_total = 0;
  for (const auto& r : scan.rows) {
    const Estimate& e = r.measured;
    t.rows.push_back({r.theta, r.transmittance, e.point.p_success, e.point.p_error, e.point.p_inconclusive,
                      e.se_success, e.se_error, e.se_inconclusive, e.relative_success, e.se_relative,
                      r.predicted.p_success, r.predicted.p_inconclusive, r.optimal_success, r.counts.error_count(),
                      e.coincidences});
    max_pe = std::max(max_pe, e.point.p_error);
    error_total += r.counts.error_count();
  }
  const bool breach = unambiguous && noise.is_ideal() && error_total != 0;
  t.comments.push_back("mode=" + a.mode + " noise=" + a.noise + " rows=" + std::to_string(scan.rows.size()) +
                       " max_p_error=" + format_number(max_pe) + " error_coincidences=" + std::to_string(error_total));
  Json summary;
  summary["mode"] = a.mode;
  summary["noise"] = a.noise;
  summary["rows"] = scan.rows.size();
  summary["max_p_error"] = max_pe;
  summary["error_coincidences"] = error_total;

  Rendered out;
  out.body = render(t, m, common.format, summary);
  if (breach) {
    out.status = kExitThreshold;
    out.diagnostic = "ideal unambiguous scan registered " + std::to_string(error_total) + " error coincidences";
  }
  return out;
}

// dispatch -----------------------------------------------------------------------

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw ValidationError("write failed for '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void add_common(CLI::App* sub, Common& common, bool angles) {
  sub->add_option("--out", common.out, "Output path (default: standard output)");
  sub->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--seed", common.seed, "Random seed");
  if (angles) sub->add_flag("--degrees", common.degrees, "Angles are given in degrees");
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, OutputRecord* written);

int replay(const std::string& manifest_path, const std::string& out_override, std::ostream& out,
           std::ostream& err) {
  const RunManifest m = RunManifest::from_json(read_file(manifest_path));
  if (m.version != version()) {
    throw ValidationError("manifest was written by mdisc " + m.version + ", this is " + std::string(version()));
  }
  std::vector<std::string> args = m.to_args();
  std::string target = out_override;
  if (target.empty() && !m.outputs.empty()) target = m.outputs.front().path;
  if (!target.empty() && target != "-") {
    args.push_back("--out");
    args.push_back(target);
  }
  OutputRecord rec;
  const int status = execute(args, out, err, &rec);
  if (!m.outputs.empty() && rec.checksum != m.outputs.front().checksum) {
    err << "error: replay output checksum " << hex64(rec.checksum) << " differs from recorded "
        << hex64(m.outputs.front().checksum) << "\n";
    return kExitThreshold;
  }
  return status;
}

int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, OutputRecord* written) {
  CLI::App app{"Optimal discrimination of two projective qubit measurements", "mdisc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  Common common;
  CurvesArgs curves_a;
  HullArgs hull_a;
  ConvexityArgs conv_a;
  OracleArgs oracle_a;
  SimulateArgs sim_a;
  std::string manifest_path;
  std::string replay_out;

  auto* curves = app.add_subcommand("curves", "Entangled and single-qubit success curves over a P_I grid");
  curves->add_option("--theta", curves_a.theta, "Measurement angle in [0, pi/4]")->required();
  curves->add_option("--pi-grid", curves_a.pi_grid, "start:stop:step, or auto (0 to cos 2theta)");
  add_common(curves, common, true);

  auto* hull = app.add_subcommand("hull", "Convex hull of sampled single-qubit strategies");
  hull->add_option("--c", hull_a.c, "Overlap cos 2theta in [0, 1]")->required();
  hull->add_option("--samples", hull_a.samples, "Number of sampled strategies (>= 100)");
  add_common(hull, common, false);

  auto* conv = app.add_subcommand("convexity", "Second derivative of the optimal pure-probe curve");
  conv->add_option("--c-grid", conv_a.c_grid, "start:stop:step over c");
  conv->add_option("--pi-grid", conv_a.pi_grid, "start:stop:step over P_I, or auto");
  conv->add_option("--pi-points", conv_a.pi_points, "Convex-branch points per c for the auto grid");
  conv->add_option("--concave-points", conv_a.concave_points, "Concave-branch points per c for the auto grid");
  conv->add_option("--step", conv_a.h, "Finite-difference step");
  conv->add_option("--branch", conv_a.branch, "auto (by P_IB), convex or concave");
  add_common(conv, common, false);

  auto* oracle = app.add_subcommand("oracle", "Numerical optimum over process-POVM testers");
  oracle->add_option("--theta", oracle_a.theta, "Measurement angle in [0, pi/4]")->required();
  oracle->add_option("--pi", oracle_a.pi, "Target inconclusive probability")->required();
  oracle->add_option("--method", oracle_a.method, "ascent or grid");
  oracle->add_option("--tol", oracle_a.tol, "Agreement tolerance");
  oracle->add_option("--restarts", oracle_a.restarts, "Ascent restarts");
  oracle->add_option("--grid-resolution", oracle_a.grid_resolution, "Grid angle steps");
  add_common(oracle, common, true);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo simulation of the feed-forward experiment");
  sim->add_option("--mode", sim_a.mode, "intermediate or unambiguous");
  sim->add_option("--theta-list", sim_a.theta_list, "Comma-separated angles, or paper (j pi/30, j = 1..7)");
  sim->add_option("--t-grid", sim_a.t_grid, "start:stop:step over the VRC transmittance, or auto");
  sim->add_option("--trials", sim_a.trials, "Trials per row");
  sim->add_option("--noise", sim_a.noise, "Preset name (ideal, preset_paperlike) or config path");
  sim->add_option("--feed-forward", sim_a.feed_forward, "Apply the conditional correction (true/false)");
  add_common(sim, common, true);

  auto* rep = app.add_subcommand("replay", "Re-run a command from its manifest");
  rep->add_option("--manifest", manifest_path, "Manifest JSON")->required();
  rep->add_option("--out", replay_out, "Override the recorded output path");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << (dynamic_cast<const CLI::CallForVersion*>(&e) ? std::string(version()) + "\n" : app.help());
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }

  try {
    if (rep->parsed()) return replay(manifest_path, replay_out, out, err);

    if (common.format.empty()) common.format = oracle->parsed() ? "json" : "csv";
    RunManifest m;
    Rendered r;
    if (curves->parsed()) {
      m = base_manifest("curves", common);
      r = cmd_curves(curves_a, common, m);
    } else if (hull->parsed()) {
      m = base_manifest("hull", common);
      r = cmd_hull(hull_a, common, m);
    } else if (conv->parsed()) {
      m = base_manifest("convexity", common);
      r = cmd_convexity(conv_a, common, m);
    } else if (oracle->parsed()) {
      m = base_manifest("oracle", common);
      r = cmd_oracle(oracle_a, common, m);
    } else {
      m = base_manifest("simulate", common);
      r = cmd_simulate(sim_a, common, m);
    }

    OutputRecord rec{common.out.empty() ? "-" : common.out, fnv1a64(r.body), r.body.size()};
    m.outputs.push_back(rec);
    if (rec.path == "-") {
      out << r.body;
      err << m.to_json();
    } else {
      write_file(rec.path, r.body);
      write_file(rec.path + ".manifest.json", m.to_json());
    }
    if (written) *written = rec;
    if (!r.diagnostic.empty()) err << "error: " << r.diagnostic << "\n";
    return r.status;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const SingularityError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  }
}

}  // namespace

std::string_view version() { return MDISC_VERSION; }

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

std::string format_exact(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<double> parse_grid(std::string_view spec) {
  double parts[3];
  std::size_t pos = 0;
  for (int j = 0; j < 3; ++j) {
    const auto next = j < 2 ? spec.find(':', pos) : spec.size();
    if (next == std::string_view::npos) throw ValidationError("grid must be start:stop:step, got '" + std::string(spec) + "'");
    const std::string_view item = spec.substr(pos, next - pos);
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), parts[j]);
    if (ec != std::errc{} || ptr != item.data() + item.size() || !std::isfinite(parts[j])) {
      throw ValidationError("bad number '" + std::string(item) + "' in grid '" + std::string(spec) + "'");
    }
    pos = next + 1;
  }
  if (parts[0] != parts[1] && (parts[2] == 0.0 || (parts[1] - parts[0]) * parts[2] < 0.0)) {
    throw ValidationError("grid step does not lead from start to stop in '" + std::string(spec) + "'");
  }
  if (parts[0] != parts[1] && std::abs((parts[1] - parts[0]) / parts[2]) > 1e7) {
    throw ValidationError("grid '" + std::string(spec) + "' has too many points");
  }
  return inclusive_grid(parts[0], parts[1], parts[2]);
}

double resolve_theta(double value, bool degrees) {
  double t = degrees ? value * std::numbers::pi / 180.0 : value;
  constexpr double quarter = std::numbers::pi / 4.0;
  if (t > quarter && t <= quarter + kThetaSnap) t = quarter;
  if (t < 0.0 && t >= -kThetaSnap) t = 0.0;
  return t;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  return execute(args, out, err, nullptr);
}

}  // namespace mdisc::cli
