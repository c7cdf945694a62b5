#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qperc/analysis.hpp"
#include "qperc/analytic.hpp"
#include "qperc/dynamics.hpp"
#include "qperc/errors.hpp"
#include "qperc/montecarlo.hpp"
#include "qperc/params.hpp"

namespace qperc::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string subcommand;
  std::optional<double> p;
  std::optional<double> pe;
  std::optional<double> tau;
  std::optional<double> pmin;
  std::optional<double> pmax;
  std::optional<std::size_t> steps;
  std::string convention = "paper_additive";
  std::size_t length = 1'000'000;
  std::size_t trials = 50;
  std::uint64_t seed = 1;
  std::optional<std::size_t> rmax;
  std::optional<double> release_p;
  bool include_zero_open = false;
  std::string out;
  std::string format = "csv";
  std::string source = "analytic";
  std::optional<double> pe_delayed;
  unsigned threads = 0;
  int dimension = 1;
  bool timestamp = false;
};

using Value = std::variant<double, std::int64_t, std::uint64_t, bool, std::string>;

struct Table {
  std::vector<std::pair<std::string, Value>> metadata;
  std::vector<std::string> columns;
  // Columns whose infinite values mean "diverges"; JSON pairs them with a flag.
  std::set<std::string> divergent_columns;
  std::vector<std::vector<Value>> rows;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const Value& v) {
  struct Visitor {
    std::string operator()(double d) const { return format_double(d); }
    std::string operator()(std::int64_t i) const { return std::to_string(i); }
    std::string operator()(std::uint64_t u) const { return std::to_string(u); }
    std::string operator()(bool b) const { return b ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string quoted = "\"";
      for (char c : s) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      return quoted + "\"";
    }
  };
  return std::visit(Visitor{}, v);
}

std::string render_csv(const Table& table) {
  std::string text;
  for (const auto& [key, value] : table.metadata) {
    text += "# " + key + "=" + csv_field(value) + "\n";
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    text += (i ? "," : "") + table.columns[i];
  }
  text += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      text += (i ? "," : "") + csv_field(row[i]);
    }
    text += "\n";
  }
  return text;
}

nlohmann::ordered_json json_value(const Value& v) {
  struct Visitor {
    nlohmann::ordered_json operator()(double d) const {
      return std::isfinite(d) ? nlohmann::ordered_json(d) : nlohmann::ordered_json(nullptr);
    }
    nlohmann::ordered_json operator()(std::int64_t i) const { return i; }
    nlohmann::ordered_json operator()(std::uint64_t u) const { return u; }
    nlohmann::ordered_json operator()(bool b) const { return b; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
  };
  return std::visit(Visitor{}, v);
}

std::string render_json(const Table& table) {
  nlohmann::ordered_json doc;
  doc["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : table.metadata) doc["metadata"][key] = json_value(value);
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      const std::string& name = table.columns[i];
      obj[name] = json_value(row[i]);
      if (table.divergent_columns.count(name)) {
        const auto* d = std::get_if<double>(&row[i]);
        obj[name + "_divergent"] = d != nullptr && std::isinf(*d);
      }
    }
    doc["rows"].push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Convention convention_of(const Options& o) {
  const auto c = parse_convention(o.convention);
  if (!c) {
    throw UsageError("unknown convention '" + o.convention +
                     "' (expected paper_additive, independent_overlap or filter_closed_only)");
  }
  return *c;
}

double resolve_pe(const Options& o, double fallback) {
  if (o.tau) return filtering_probability(*o.tau);
  const double pe = o.pe.value_or(fallback);
  require_probability(pe, "p_e");
  return pe;
}

double require_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw UsageError(std::string(name) + " must lie in [0, 1], got " + format_double(v));
  }
  return v;
}

std::vector<double> p_grid(const Options& o, std::size_t default_steps) {
  if (o.p) return {*o.p};
  const double lo = require_unit(o.pmin.value_or(0.0), "--pmin");
  const double hi = require_unit(o.pmax.value_or(1.0), "--pmax");
  const std::size_t steps = o.steps.value_or(default_steps);
  if (!(lo < hi)) throw UsageError("--pmin must be smaller than --pmax");
  if (steps < 2) throw UsageError("--steps must be at least 2");
  return Schedule::linear_ramp(steps, lo, hi).values();
}

std::vector<double> sampled_grid(const Options& o) {
  if (!o.p && !o.pmin && !o.pmax) {
    throw UsageError(o.subcommand + " needs --p or a --pmin/--pmax grid");
  }
  return p_grid(o, 11);
}

Table base_table(const Options& o) {
  Table t;
  t.metadata = {
      {"artifact_version", std::string(kArtifactVersion)},
      {"subcommand", o.subcommand},
      {"prng", std::string(kPrngName)},
      {"seed_mixer", std::string(kSeedMixerName)},
      {"master_seed", o.seed},
      {"convention", o.convention},
      {"timestamp_excluded", !o.timestamp},
  };
  if (o.timestamp) t.metadata.emplace_back("timestamp", utc_timestamp());
  return t;
}

SweepConfig sweep_config(const Options& o, std::size_t default_rmax) {
  SweepConfig config;
  config.convention = convention_of(o);
  config.length_nodes = o.length;
  config.trials = o.trials;
  config.master_seed = o.seed;
  config.r_max = o.rmax.value_or(default_rmax);
  config.threads = o.threads;
  if (config.length_nodes < 2) throw UsageError("--length must be at least 2");
  if (config.trials < 1) throw UsageError("--trials must be at least 1");
  if (config.r_max + 1 > config.length_nodes) throw UsageError("--rmax must be below --length");
  return config;
}

void add_sweep_metadata(Table& t, const SweepConfig& c, double pe) {
  t.metadata.emplace_back("pe", pe);
  t.metadata.emplace_back("length_nodes", static_cast<std::uint64_t>(c.length_nodes));
  t.metadata.emplace_back("trials", static_cast<std::uint64_t>(c.trials));
  t.metadata.emplace_back("r_max", static_cast<std::uint64_t>(c.r_max));
}

std::vector<GridPoint> validated_cells(const std::vector<double>& grid, double pe, Convention c) {
  std::vector<GridPoint> cells;
  for (double p : grid) {
    validate_convention(ModelParams(p, pe), c);
    cells.push_back({p, pe});
  }
  return cells;
}

Table cmd_analytic(const Options& o) {
  const double pe = resolve_pe(o, 0.25);
  Table t = base_table(o);
  t.metadata.emplace_back("pe", pe);
  t.metadata.emplace_back("include_zero_open", o.include_zero_open);
  t.columns = {"p", "pe", "p_c", "mean_cluster_size", "strength", "correlation_length"};
  t.divergent_columns = {"mean_cluster_size", "correlation_length"};
  for (double p : p_grid(o, 101)) {
    const ModelParams params(p, pe);
    double s = kInf;
    if (params.connectivity() < 1.0) s = mean_cluster_size(params, o.include_zero_open);
    const double q = params.connectivity();
    const double xi = q >= 1.0 ? kInf : (q > 0.0 ? correlation_length(params) : 0.0);
    t.rows.push_back({p, pe, critical_occupation(pe), s,
                      percolation_strength_closed(params).strength_p, xi});
  }
  return t;
}

Table cmd_strength(const Options& o) {
  const double pe = resolve_pe(o, 0.25);
  Table t = base_table(o);
  t.metadata.emplace_back("pe", pe);
  t.columns = {"p",         "pe",     "p_c",           "strength",
               "q_open",    "q_pair", "product_x",     "root",
               "strength_fixed_point", "fixed_point_iterations"};
  for (double p : p_grid(o, 101)) {
    const ModelParams params(p, pe);
    const auto closed = percolation_strength_closed(params);
    const auto fixed = percolation_strength_fixed_point(params);
    t.rows.push_back({p, pe, critical_occupation(pe), closed.strength_p, closed.q_open,
                      closed.q_pair, closed.product_x, std::string(to_string(closed.root_used)),
                      fixed.strength_p, static_cast<std::uint64_t>(fixed.iterations)});
  }
  return t;
}

Table cmd_simulate(const Options& o) {
  const double pe = resolve_pe(o, 0.25);
  const SweepConfig config = sweep_config(o, 10);
  const auto cells = validated_cells(sampled_grid(o), pe, config.convention);
  const auto sweep = run_sweep(cells, config);
  Table t = base_table(o);
  add_sweep_metadata(t, config, pe);
  t.columns = {"p",
               "pe",
               "mean_cluster_size",
               "mean_cluster_size_stderr",
               "mean_cluster_size_classical",
               "mean_cluster_size_classical_stderr",
               "order_parameter",
               "order_parameter_stderr",
               "spanning_fraction",
               "spanning_stderr",
               "spanning_trials"};
  for (const auto& row : sweep.rows) {
    t.rows.push_back({row.point.p, row.point.pe, row.mean_cluster_size.value,
                      row.mean_cluster_size.std_error, row.mean_cluster_size_classical.value,
                      row.mean_cluster_size_classical.std_error, row.order_parameter.value,
                      row.order_parameter.std_error, row.spanning.fraction, row.spanning.std_error,
                      static_cast<std::uint64_t>(row.spanning.spanning_trials)});
  }
  return t;
}

Table cmd_gr(const Options& o) {
  const double pe = resolve_pe(o, 0.25);
  const SweepConfig config = sweep_config(o, 10);
  const auto cells = validated_cells(sampled_grid(o), pe, config.convention);
  const auto sweep = run_sweep(cells, config);
  Table t = base_table(o);
  add_sweep_metadata(t, config, pe);
  t.columns = {"p",          "pe",          "r",     "g",           "g_stderr",
               "g_analytic", "g_convention", "ratio", "ratio_stderr"};
  for (const auto& row : sweep.rows) {
    const ModelParams params(row.point.p, row.point.pe);
    const double q_model = params.connectivity();
    const double q_conv = effective_connectivity(params, config.convention);
    for (std::size_t r = 0; r <= config.r_max; ++r) {
      const Estimate ratio = r < row.connectivity_ratio.size() ? row.connectivity_ratio[r]
                                                                : Estimate{kNaN, kNaN};
      const double rd = static_cast<double>(r);
      t.rows.push_back({row.point.p, row.point.pe, static_cast<std::uint64_t>(r),
                        row.pair_connectivity[r].value, row.pair_connectivity[r].std_error,
                        std::pow(q_model, rd), std::pow(q_conv, rd), ratio.value,
                        ratio.std_error});
    }
  }
  return t;
}

std::vector<Value> fit_row(const std::string& name, const FitResult& f) {
  return {name,         f.exponent_estimate,
          f.std_error,  f.window_min,
          f.window_max, static_cast<std::uint64_t>(f.points_used),
          f.r_squared,  true,
          std::string()};
}

std::vector<Value> failed_row(const std::string& name, const std::string& why) {
  return {name, kNaN, kNaN, kNaN, kNaN, std::uint64_t{0}, kNaN, false, why};
}

Table cmd_exponents(const Options& o) {
  const double pe = resolve_pe(o, 0.25);
  if (o.source != "analytic" && o.source != "mc") {
    throw UsageError("--source must be analytic or mc");
  }
  const bool mc = o.source == "mc";
  const std::size_t steps = o.steps.value_or(mc ? 6 : 10);
  if (steps < 3) throw UsageError("--steps must be at least 3 for exponent fits");
  const auto grid = subcritical_grid(pe, steps);

  Table t = base_table(o);
  t.metadata.emplace_back("pe", pe);
  t.metadata.emplace_back("source", o.source);
  t.columns = {"exponent", "estimate", "std_error", "window_min", "window_max",
               "points_used", "r_squared", "ok", "message"};

  std::map<std::string, std::optional<FitResult>> fits;
  auto attempt = [&](const std::string& name, const std::function<FitResult()>& fit) {
    try {
      const FitResult f = fit();
      fits[name] = f;
      t.rows.push_back(fit_row(name, f));
    } catch (const EstimationError& e) {
      t.rows.push_back(failed_row(name, e.what()));
    } catch (const DomainError& e) {
      t.rows.push_back(failed_row(name, e.what()));
    }
  };

  if (mc) {
    SweepConfig config = sweep_config(o, 20);
    config.convention = Convention::paper_additive;
    add_sweep_metadata(t, config, pe);
    const auto sweep = run_sweep(validated_cells(grid, pe, config.convention), config);
    attempt("gamma", [&] {
      std::vector<CurvePoint> points;
      for (const auto& row : sweep.rows) {
        if (!std::isfinite(row.mean_cluster_size.value)) {
          throw EstimationError("no qualifying clusters at p = " + format_double(row.point.p));
        }
        points.push_back({row.point.p, row.mean_cluster_size.value});
      }
      return estimate_gamma(points, pe);
    });
    attempt("nu", [&] { return estimate_nu(connectivity_curves(sweep), pe); });
    attempt("sigma", [&] {
      TailOptions tail;
      tail.min_weight = 25.0;
      tail.count_weights = true;
      return estimate_sigma(cluster_histograms(sweep), pe, tail);
    });
    t.rows.push_back(failed_row("beta", "finite chains have no percolating cluster; use --source analytic"));
  } else {
    attempt("gamma", [&] { return estimate_gamma_analytic(pe, grid); });
    attempt("nu", [&] { return estimate_nu(analytic_connectivity_curves(pe, grid), pe); });
    attempt("sigma", [&] { return estimate_sigma(analytic_cluster_histograms(pe, grid), pe); });
    attempt("beta", [&] { return estimate_beta_analytic(pe, supercritical_grid(pe)); });
  }

  if (fits["gamma"] && fits["sigma"]) {
    const FitResult& g = *fits["gamma"];
    const FitResult& s = *fits["sigma"];
    const double tau = tau_from_scaling(g.exponent_estimate, s.exponent_estimate);
    const double se = std::hypot(s.exponent_estimate * g.std_error,
                                 g.exponent_estimate * s.std_error);
    t.rows.push_back({std::string("tau"), tau, se, kNaN, kNaN, std::uint64_t{0}, kNaN, true,
                      std::string("3 - gamma * sigma")});
  } else {
    t.rows.push_back(failed_row("tau", "needs both gamma and sigma fits"));
  }
  return t;
}

Table cmd_quench(const Options& o) {
  const double pe = resolve_pe(o, 0.49);
  const double release_p = require_unit(o.release_p.value_or(0.6), "--release-p");
  const std::size_t steps = o.steps.value_or(201);
  if (steps < 2) throw UsageError("--steps must be at least 2");
  const double lo = require_unit(o.pmin.value_or(0.0), "--pmin");
  const double hi = require_unit(o.pmax.value_or(1.0), "--pmax");
  if (!(lo < hi)) throw UsageError("--pmin must be smaller than --pmax");
  if (release_p > hi) throw UsageError("--release-p lies past the end of the ramp");
  const auto schedule = Schedule::linear_ramp(steps, lo, hi);
  const std::size_t release = schedule.first_step_at(release_p);
  const auto trajectory = delayed_trajectory(schedule, pe, release);

  Table t = base_table(o);
  t.metadata.emplace_back("pe", pe);
  t.metadata.emplace_back("release_p", release_p);
  t.metadata.emplace_back("release_step", static_cast<std::uint64_t>(release));
  t.columns = {"step", "p", "filtering_active", "strength", "increment"};
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const auto& pt = trajectory[i];
    const double inc = i == 0 ? 0.0 : pt.strength - trajectory[i - 1].strength;
    t.rows.push_back({static_cast<std::uint64_t>(pt.step), pt.p, pt.filtering_active, pt.strength,
                      inc});
  }
  return t;
}

Table cmd_figure1(const Options& o) {
  const double pe = resolve_pe(o, 0.25);
  const double pe_delayed = o.pe_delayed.value_or(0.49);
  require_probability(pe_delayed, "delayed p_e");
  const double release_p = require_unit(o.release_p.value_or(0.6), "--release-p");
  const auto grid = p_grid(o, 201);
  const Schedule schedule(grid);
  if (release_p > grid.back()) throw UsageError("--release-p lies past the end of the grid");
  const auto continuous = continuous_trajectory(schedule, pe);
  const auto delayed = delayed_trajectory(schedule, pe_delayed, schedule.first_step_at(release_p));

  Table t = base_table(o);
  t.metadata.emplace_back("pe", pe);
  t.metadata.emplace_back("pe_delayed", pe_delayed);
  t.metadata.emplace_back("release_p", release_p);
  t.columns = {"p", "strength_continuous", "strength_delayed"};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    t.rows.push_back({grid[i], continuous[i].strength, delayed[i].strength});
  }
  return t;
}

Table cmd_audit(const Options& o) {
  const ExponentSet e = declared_exponents();
  const auto audit = scaling_law_audit(e, o.dimension);
  Table t = base_table(o);
  t.metadata.emplace_back("dimension", static_cast<std::int64_t>(o.dimension));
  t.metadata.emplace_back("gamma", e.gamma);
  t.metadata.emplace_back("sigma", e.sigma);
  t.metadata.emplace_back("nu", e.nu);
  t.metadata.emplace_back("tau_fisher", e.tau_fisher);
  t.metadata.emplace_back("beta", e.beta);
  t.columns = {"relation", "left", "right", "holds", "tolerance"};
  for (const auto& r : audit.relations) {
    t.rows.push_back({r.name, r.left, r.right, r.holds, r.tolerance});
  }
  return t;
}

void write_output(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("cannot open output file " + o.out);
  file << text;
  if (!file) throw UsageError("failed writing output file " + o.out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Percolation of quantum communication clusters on a chain", "qperc"};
  app.set_config("--config", "", "Read flat key=value settings; command-line flags win");
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> subcommands = {
      {"analytic", "Closed-form S, P and xi over a p grid"},
      {"simulate", "Monte Carlo sweep of cluster observables"},
      {"gr", "Monte Carlo pair connectivity g(r)"},
      {"exponents", "Fit gamma, nu, sigma, beta and derive tau"},
      {"strength", "Percolation strength: closed form and fixed point"},
      {"quench", "Trajectory with filtering released at --release-p"},
      {"figure1", "Continuous and delayed strength curves"},
      {"audit", "Check the classical scaling relations"},
  };
  for (const auto& [name, description] : subcommands) {
    app.add_subcommand(name, description)->fallthrough();
  }

  auto* p_opt = app.add_option("--p", o.p, "Occupation probability (single point)");
  auto* pe_opt = app.add_option("--pe", o.pe, "Filtering success probability");
  auto* tau_opt = app.add_option("--tau", o.tau, "Schmidt weight; sets p_e = 2 tau (1 - tau)");
  tau_opt->excludes(pe_opt);
  auto* pmin_opt = app.add_option("--pmin", o.pmin, "Grid start");
  auto* pmax_opt = app.add_option("--pmax", o.pmax, "Grid end");
  p_opt->excludes(pmin_opt)->excludes(pmax_opt);
  app.add_option("--steps", o.steps, "Grid points");
  app.add_option("--convention", o.convention,
                 "paper_additive, independent_overlap or filter_closed_only")
      ->capture_default_str();
  app.add_option("--length", o.length, "Chain length in nodes")->capture_default_str();
  app.add_option("--trials", o.trials, "Trials per grid point")->capture_default_str();
  app.add_option("--seed", o.seed, "Master seed")->capture_default_str();
  app.add_option("--rmax", o.rmax, "Largest separation for g(r)");
  app.add_option("--release-p", o.release_p, "p at which filtering is released");
  app.add_flag("--include-zero-open", o.include_zero_open,
               "Count clusters made only of filtered pairs in S");
  app.add_option("--out", o.out, "Output file (default stdout)");
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--source", o.source, "Exponent source: analytic or mc")
      ->check(CLI::IsMember({"analytic", "mc"}))
      ->capture_default_str();
  app.add_option("--pe-delayed", o.pe_delayed, "p_e of the delayed figure1 curve");
  app.add_option("--threads", o.threads, "Worker threads (0 = hardware)");
  app.add_option("--dimension", o.dimension, "Lattice dimension for the audit")
      ->capture_default_str();
  app.add_flag("--timestamp", o.timestamp, "Record the run time in the metadata");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  o.subcommand = app.get_subcommands().front()->get_name();

  static const std::map<std::string, Table (*)(const Options&)> handlers = {
      {"analytic", cmd_analytic}, {"simulate", cmd_simulate}, {"gr", cmd_gr},
      {"exponents", cmd_exponents}, {"strength", cmd_strength}, {"quench", cmd_quench},
      {"figure1", cmd_figure1},   {"audit", cmd_audit},
  };

  try {
    const Table table = handlers.at(o.subcommand)(o);
    write_output(o, o.format == "json" ? render_json(table) : render_csv(table), out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "qperc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    err << "qperc: " << e.what() << "\n";
    return kExitDomain;
  } catch (const EstimationError& e) {
    err << "qperc: " << e.what() << "\n";
    return kExitEstimation;
  } catch (const ConvergenceError& e) {
    err << "qperc: " << e.what() << "\n";
    return kExitEstimation;
  }
}

}  // namespace qperc::cli
