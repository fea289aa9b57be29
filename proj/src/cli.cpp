#include "hvpol/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hvpol/cascade.hpp"
#include "hvpol/epr.hpp"
#include "hvpol/error.hpp"
#include "hvpol/fitting.hpp"
#include "hvpol/mc.hpp"
#include "hvpol/presets.hpp"
#include "hvpol/shrinkage.hpp"

namespace hvpol::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Options {
  // model parameter sources
  std::string preset;
  std::string params_file;
  std::optional<double> a, e, c, sigma, eps_shift, eta;
  // shared
  std::string grid = "0:90:1";
  std::string normalization = "unit0";
  std::string out;
  std::string format;
  int quad_nodes = 64;
  double quad_rtol = 1e-10;
  double quad_atol = 1e-12;
  std::uint64_t seed = 1;
  double eps_leak = 0.0;
  // command specific
  std::string profile = "hv";
  double beta_deg = 0.0;
  double alpha_deg = 45.0;
  std::string totals_out;
  std::string fit_model = "simple";
  int starts = 20;
  int max_iter = 5000;
  std::string epr_mode = "scan";
  std::string epr_model = "hv";
  std::string settings = "0,45,22.5,67.5";
  double step_deg = 7.5;
  std::string source = "parallel";
  std::string mc_kind = "pair";
  std::uint64_t samples = 1'000'000;
  int streams = 16;
  bool check_quadrature = false;
};

struct Grid {
  std::vector<double> degrees;
  std::vector<double> radians;
};

struct ModelParams {
  std::string label;  // preset name or "custom"
  TransmissionProfileParams profile;
  std::optional<ShrinkageParams> shrinkage;
};

// ---------------------------------------------------------------------------
// formatting

std::string num(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of -0
  return fmt::format("{:.12g}", v);
}

Json params_json(const ModelParams& m) {
  Json j;
  j["a"] = m.profile.a();
  j["e"] = m.profile.e();
  j["c"] = m.profile.c();
  if (m.shrinkage) {
    j["sigma"] = m.shrinkage->sigma();
    j["eps_shift"] = m.shrinkage->eps_shift();
    j["eta"] = m.shrinkage->eta();
  }
  return j;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string to_csv(const Table& t) {
  std::string s;
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + num(row[i]);
    s += '\n';
  }
  return s;
}

Json table_json(const Table& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) rows.push_back(r);
  return Json{{"columns", t.columns}, {"rows", rows}};
}

void emit(const std::string& text, const Options& o, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + o.out);
  f << text;
}

// ---------------------------------------------------------------------------
// configuration

template <class T>
T json_as(const Json& v, const std::string& key) {
  try {
    return v.get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("params file: key '" + key + "' has the wrong type");
  }
}

// Applies a JSON config file. Flags given on the command line win over file
// values; model parameters may come from the file or from flags, not both.
void apply_params_file(Options& o, const CLI::App& cmd) {
  std::ifstream f(o.params_file);
  if (!f) throw ConfigError("cannot open params file " + o.params_file);
  Json j;
  try {
    j = Json::parse(f);
  } catch (const Json::parse_error& err) {
    throw ConfigError(std::string("params file is not valid JSON: ") + err.what());
  }
  if (!j.is_object()) throw ConfigError("params file must hold a JSON object");

  auto given = [&](const char* flag) {
    try {
      return cmd.get_option(flag)->count() > 0;
    } catch (const CLI::OptionNotFound&) {
      return false;
    }
  };
  const std::map<std::string, std::optional<double>*> model_keys{
      {"a", &o.a},         {"e", &o.e},         {"c", &o.c},
      {"sigma", &o.sigma}, {"eps_shift", &o.eps_shift}, {"eta", &o.eta}};

  for (const auto& [key, value] : j.items()) {
    if (key == "schema") continue;
    if (auto it = model_keys.find(key); it != model_keys.end()) {
      if (given(("--" + std::string(key == "eps_shift" ? "eps-shift" : key)).c_str()))
        throw ConfigError("parameter '" + key + "' given both in the params file and as a flag");
      *it->second = json_as<double>(value, key);
    } else if (key == "preset") {
      if (!o.preset.empty()) throw ConfigError("preset given both in the params file and as a flag");
      o.preset = json_as<std::string>(value, key);
    } else if (key == "grid") {
      if (!given("--grid")) o.grid = json_as<std::string>(value, key);
    } else if (key == "normalization") {
      if (!given("--normalization")) o.normalization = json_as<std::string>(value, key);
    } else if (key == "eps_leak") {
      if (!given("--eps-leak")) o.eps_leak = json_as<double>(value, key);
    } else if (key == "quad_nodes") {
      if (!given("--quad-nodes")) o.quad_nodes = json_as<int>(value, key);
    } else if (key == "quad_rtol") {
      if (!given("--quad-rtol")) o.quad_rtol = json_as<double>(value, key);
    } else if (key == "quad_atol") {
      if (!given("--quad-atol")) o.quad_atol = json_as<double>(value, key);
    } else if (key == "seed") {
      if (!given("--seed")) o.seed = json_as<std::uint64_t>(value, key);
    } else {
      throw ConfigError("params file: unknown key '" + key + "'");
    }
  }
}

bool any_inline(const Options& o) {
  return o.a || o.e || o.c || o.sigma || o.eps_shift || o.eta;
}

ModelParams resolve_model(const Options& o, std::string_view default_preset, bool need_shrinkage) {
  if (!o.preset.empty() && any_inline(o))
    throw ConfigError("use either a preset or explicit model parameters, not both");
  std::string name = o.preset;
  if (name.empty() && !any_inline(o)) name = std::string(default_preset);
  if (!name.empty()) {
    const auto p = presets::find(name);
    if (!p) throw ConfigError("unknown preset '" + name + "'");
    ModelParams m{std::string(p->name), p->profile, p->shrinkage};
    if (need_shrinkage && !m.shrinkage)
      m.shrinkage = presets::fig2_shrinkage();  // profile-only preset: borrow the fitted kernel
    return m;
  }
  if (!(o.a && o.e && o.c)) throw ConfigError("explicit model parameters need all of a, e, c");
  ModelParams m{"custom", TransmissionProfileParams(*o.a, *o.e, *o.c), std::nullopt};
  if (o.sigma || o.eps_shift || o.eta) {
    if (!(o.sigma && o.eps_shift && o.eta))
      throw ConfigError("shrinkage parameters need all of sigma, eps_shift, eta");
    m.shrinkage = ShrinkageParams(*o.sigma, *o.eps_shift, *o.eta);
  } else if (need_shrinkage) {
    throw ConfigError("this command needs sigma, eps_shift and eta");
  }
  return m;
}

Grid parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("grid must be start:stop:step in degrees, got '" + spec + "'");
    }
  }
  if (parts.size() != 3) throw ConfigError("grid must be start:stop:step in degrees, got '" + spec + "'");
  Grid g;
  g.radians = degree_grid(parts[0], parts[1], parts[2]);
  for (std::size_t i = 0; i < g.radians.size(); ++i)
    g.degrees.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return g;
}

Normalization parse_normalization(const std::string& s) {
  if (s == "raw") return Normalization::raw;
  if (s == "unit0") return Normalization::unit_at_zero;
  if (s == "density") return Normalization::incident_density;
  throw ConfigError("normalization must be raw, unit0 or density");
}

// Like curve(), but unit0 also works on grids that skip 0 deg.
TransmissionCurve eval_curve(const std::function<double(double)>& fn, const std::vector<double>& grid,
                             Normalization norm) {
  if (norm != Normalization::unit_at_zero || std::find(grid.begin(), grid.end(), 0.0) != grid.end())
    return curve(fn, grid, norm);
  auto c = curve(fn, grid, Normalization::raw);
  const double at_zero = fn(0.0);
  if (!(at_zero > 0.0)) throw NumericError("value at zero is not positive");
  for (double& v : c.values) v /= at_zero;
  c.normalization = norm;
  return c;
}

QuadratureSpec quad_spec(const Options& o) {
  QuadratureSpec q;
  q.base_nodes = o.quad_nodes;
  q.rel_tol = o.quad_rtol;
  q.abs_tol = o.quad_atol;
  q.validate();
  return q;
}

std::string resolved_format(const Options& o, const char* fallback) {
  const std::string f = o.format.empty() ? fallback : o.format;
  if (f != "csv" && f != "json") throw ConfigError("format must be csv or json");
  return f;
}

Json document(const char* command, const ModelParams& m) {
  Json j;
  j["schema"] = 1;
  j["command"] = command;
  j["preset"] = m.label;
  j["params"] = params_json(m);
  return j;
}

// ---------------------------------------------------------------------------
// commands

void cmd_eval_pair(const Options& o, std::ostream& out) {
  const ModelParams m = resolve_model(o, presets::kFig1Simple, false);
  const Grid g = parse_grid(o.grid);
  const QuadratureSpec q = quad_spec(o);
  const MalusTarget target(o.eps_leak);
  const Normalization norm = parse_normalization(o.normalization);
  ProfileFn profile;
  if (o.profile == "hv")
    profile = profile_fn(m.profile);
  else if (o.profile == "belifante")
    profile = belifante_fn();
  else
    throw ConfigError("profile must be hv or belifante");

  const auto pair = eval_curve([&](double a) { return pair_transmission_raw(profile, a, q); }, g.radians, norm);
  Table t{{"alpha_deg", "p1", "p2_norm", "d", "malus"}, {}};
  for (std::size_t i = 0; i < g.radians.size(); ++i) {
    const double p = profile(angular_distance(g.radians[i], 0.0));
    t.rows.push_back({g.degrees[i], p, pair.values[i], p / kHalfPi, malus(g.radians[i], target)});
  }
  if (resolved_format(o, "csv") == "csv") return emit(to_csv(t), o, out);
  Json j = document("eval-pair", m);
  j["profile"] = o.profile;
  j["normalization"] = o.normalization;
  j.update(table_json(t));
  emit(j.dump(2) + "\n", o, out);
}

void cmd_eval_triple(const Options& o, std::ostream& out) {
  const ModelParams m = resolve_model(o, presets::kFig1Simple, false);
  const Grid g = parse_grid(o.grid);
  const QuadratureSpec q = quad_spec(o);
  const double beta = deg_to_rad(o.beta_deg);
  const auto hv = eval_curve([&](double a) { return triple_transmission(m.profile, a, beta, q); },
                        g.radians, parse_normalization(o.normalization));
  Table t{{"alpha_deg", "hv_norm", "qm"}, {}};
  for (std::size_t i = 0; i < g.radians.size(); ++i)
    t.rows.push_back({g.degrees[i], hv.values[i], qm_triple(g.radians[i], beta)});
  if (resolved_format(o, "csv") == "csv") return emit(to_csv(t), o, out);
  Json j = document("eval-triple", m);
  j["beta_deg"] = o.beta_deg;
  j["normalization"] = o.normalization;
  j.update(table_json(t));
  emit(j.dump(2) + "\n", o, out);
}

void cmd_eval_shrinkage(const Options& o, std::ostream& out) {
  const ModelParams m = resolve_model(o, presets::kFig2Shrinkage, true);
  const Grid g = parse_grid(o.grid);
  const MalusTarget target(o.eps_leak);
  const ShrinkageModel model(m.profile, *m.shrinkage, quad_spec(o));
  const auto pair = eval_curve([&](double a) { return model.pair_transmission(a); }, g.radians,
                          parse_normalization(o.normalization));
  const auto d = model.output_distribution(g.radians);

  Table t{{"alpha_deg", "p1", "p2_norm", "d", "malus"}, {}};
  for (std::size_t i = 0; i < g.radians.size(); ++i)
    t.rows.push_back({g.degrees[i], p1(angular_distance(g.radians[i], 0.0), m.profile),
                      pair.values[i], d.densities[i], malus(g.radians[i], target)});

  const TotalRatios raw = model.total_ratios(TotalsConvention::raw);
  Json totals = Json::array();
  for (auto conv : kAllConventions) {
    const double f = convention_factor(conv);
    totals.push_back({{"convention", convention_name(conv)},
                      {"I1_over_I0", f * raw.i1_over_i0},
                      {"I2_over_I0", f * raw.i2_over_i0}});
  }
  Json record = document("eval-shrinkage", m);
  record["totals"] = totals;

  if (resolved_format(o, "csv") == "csv") {
    emit(to_csv(t), o, out);
    std::string side = o.totals_out;
    if (side.empty() && !o.out.empty()) side = o.out + ".totals.json";
    if (!side.empty()) {
      std::ofstream f(side, std::ios::binary);
      if (!f) throw ConfigError("cannot open totals file " + side);
      f << record.dump(2) << "\n";
    }
    return;
  }
  record["normalization"] = o.normalization;
  record.update(table_json(t));
  emit(record.dump(2) + "\n", o, out);
}

void cmd_fit(const Options& o, std::ostream& out) {
  ModelKind kind;
  if (o.fit_model == "simple")
    kind = ModelKind::simple;
  else if (o.fit_model == "shrinkage")
    kind = ModelKind::shrinkage;
  else
    throw ConfigError("model must be simple or shrinkage");
  const bool shrink = kind == ModelKind::shrinkage;
  const ModelParams m = resolve_model(o, shrink ? presets::kFig2Shrinkage : presets::kFig1Simple, shrink);

  FitProblem problem = FitProblem::with_defaults(kind, MalusTarget(o.eps_leak));
  const Grid g = parse_grid(o.grid);
  problem.grid = g.radians;
  problem.weights.assign(g.radians.size(), 1.0);
  problem.quad = quad_spec(o);
  problem.start = {m.profile.a(), m.profile.e(), m.profile.c()};
  if (shrink) {
    problem.start.push_back(m.shrinkage->sigma());
    problem.start.push_back(m.shrinkage->eps_shift());
    problem.start.push_back(m.shrinkage->eta());
  }
  FitOptions opts;
  opts.starts = o.starts;
  opts.seed = o.seed;
  opts.max_iterations = o.max_iter;
  const FitResult r = minimize(problem, opts);

  if (resolved_format(o, "json") == "csv") {
    Table t{{"alpha_deg", "model", "target", "residual"}, {}};
    const auto rows = residual_report(r, problem);
    for (std::size_t i = 0; i < rows.size(); ++i)
      t.rows.push_back({g.degrees[i], rows[i].model, rows[i].target, rows[i].residual});
    return emit(to_csv(t), o, out);
  }
  Json params;
  const auto names = parameter_names(kind);
  for (std::size_t i = 0; i < names.size(); ++i) params[std::string(names[i])] = r.params[i];
  Json j;
  j["schema"] = 1;
  j["model"] = model_name(kind);
  j["params"] = params;
  j["objective"] = r.objective;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["grid"] = g.degrees;
  j["residuals"] = r.per_point_residuals;
  j["under_determined"] = r.under_determined;
  j["starts"] = o.starts;
  j["seed"] = o.seed;
  j["best_start"] = r.best_start;
  j["eps_leak"] = o.eps_leak;
  emit(j.dump(2) + "\n", o, out);
}

AnalyzerSettings parse_settings(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(deg_to_rad(std::stod(item)));
    } catch (const std::exception&) {
      throw ConfigError("settings must be four comma-separated angles in degrees");
    }
  }
  if (v.size() != 4) throw ConfigError("settings must be four comma-separated angles in degrees");
  return {v[0], v[1], v[2], v[3]};
}

void cmd_epr(const Options& o, std::ostream& out) {
  PairSource source;
  if (o.source == "parallel")
    source = PairSource::parallel;
  else if (o.source == "perpendicular")
    source = PairSource::perpendicular;
  else
    throw ConfigError("source must be parallel or perpendicular");

  CorrelationFn e;
  Json j;
  j["schema"] = 1;
  j["model"] = o.epr_model;
  if (o.epr_model == "hv") {
    const ModelParams m = resolve_model(o, presets::kFig1Simple, false);
    e = hv_correlation(m.profile, quad_spec(o), source);
    j["preset"] = m.label;
    j["params"] = params_json(m);
  } else if (o.epr_model == "qm") {
    e = qm_correlation;
  } else {
    throw ConfigError("model must be hv or qm");
  }

  AnalyzerSettings s;
  double S = 0.0;
  std::optional<double> lattice;
  if (o.epr_mode == "chsh") {
    s = parse_settings(o.settings);
    S = chsh(e, s);
  } else if (o.epr_mode == "scan") {
    const auto r = chsh_scan(e, deg_to_rad(o.step_deg));
    s = r.argmax;
    S = r.max_s;
    lattice = r.lattice_max;
  } else {
    throw ConfigError("mode must be chsh or scan");
  }
  j["settings"] = {{"a", rad_to_deg(s.a)},
                   {"a_prime", rad_to_deg(s.a_prime)},
                   {"b", rad_to_deg(s.b)},
                   {"b_prime", rad_to_deg(s.b_prime)},
                   {"unit", "deg"}};
  j["S"] = S;
  j["bound_respected"] = S <= 2.0 + 1e-6;
  j["mode"] = o.epr_mode;
  j["source"] = o.source;
  if (lattice) j["lattice_S"] = *lattice;

  if (resolved_format(o, "json") == "csv") {
    Table t{{"a_deg", "a_prime_deg", "b_deg", "b_prime_deg", "S"},
            {{rad_to_deg(s.a), rad_to_deg(s.a_prime), rad_to_deg(s.b), rad_to_deg(s.b_prime), S}}};
    return emit(to_csv(t), o, out);
  }
  emit(j.dump(2) + "\n", o, out);
}

void cmd_mc(const Options& o, std::ostream& out) {
  const bool shrink = o.mc_kind == "shrinkage";
  const ModelParams m =
      resolve_model(o, shrink ? presets::kFig2Shrinkage : presets::kFig1Simple, shrink);
  McConfig cfg;
  cfg.samples = o.samples;
  cfg.seed = o.seed;
  cfg.stream_count = o.streams;
  cfg.validate();
  const double alpha = deg_to_rad(o.alpha_deg), beta = deg_to_rad(o.beta_deg);
  const QuadratureSpec q = quad_spec(o);

  McEstimate est;
  double reference = 0.0;
  if (o.mc_kind == "pair") {
    est = mc_pair(m.profile, alpha, cfg);
    if (o.check_quadrature) reference = pair_transmission_raw(m.profile, alpha, q) / kPi;
  } else if (o.mc_kind == "triple") {
    est = mc_triple(m.profile, alpha, beta, cfg);
    if (o.check_quadrature) reference = triple_transmission(m.profile, alpha, beta, q) / kPi;
  } else if (o.mc_kind == "coincidence") {
    est = mc_coincidence(m.profile, alpha, beta, cfg);
    if (o.check_quadrature) reference = coincidence_rate(m.profile, alpha, beta, q);
  } else if (shrink) {
    const ShrinkageModel model(m.profile, *m.shrinkage, q);
    est = mc_pair_shrinkage(model, alpha, cfg);
    if (o.check_quadrature) reference = model.pair_transmission(alpha) / kPi;
  } else {
    throw ConfigError("kind must be pair, triple, shrinkage or coincidence");
  }

  Json j;
  j["schema"] = 1;
  j["kind"] = o.mc_kind;
  j["mean"] = est.mean;
  j["stderr"] = est.std_error;
  j["samples"] = est.samples;
  j["seed"] = o.seed;
  j["streams"] = o.streams;
  j["alpha_deg"] = o.alpha_deg;
  j["beta_deg"] = o.beta_deg;
  j["preset"] = m.label;
  j["params"] = params_json(m);
  if (o.check_quadrature) {
    j["quadrature"] = reference;
    j["within_4_stderr"] = std::fabs(est.mean - reference) <= 4.0 * est.std_error;
  }
  if (resolved_format(o, "json") == "csv") {
    Table t{{"mean", "stderr", "samples", "seed"},
            {{est.mean, est.std_error, static_cast<double>(est.samples), static_cast<double>(o.seed)}}};
    return emit(to_csv(t), o, out);
  }
  emit(j.dump(2) + "\n", o, out);
}

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--preset", o.preset, "Named parameter set (fig1-simple, fig2-shrinkage)");
  cmd->add_option("--params-file", o.params_file, "JSON file with parameters and options");
  cmd->add_option("--a", o.a, "Profile parameter a");
  cmd->add_option("--e", o.e, "Profile exponent e");
  cmd->add_option("--c", o.c, "Profile parameter c");
  cmd->add_option("--sigma", o.sigma, "Kernel concentration sigma (rad^-2)");
  cmd->add_option("--eps-shift", o.eps_shift, "Polarization shift rate (rad^-1)");
  cmd->add_option("--eta", o.eta, "Watershed angle (rad)");
}

void add_shared_flags(CLI::App* cmd, Options& o) {
  add_model_flags(cmd, o);
  cmd->add_option("--grid", o.grid, "Angle grid start:stop:step in degrees")->capture_default_str();
  cmd->add_option("--normalization", o.normalization, "raw, unit0 or density")
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Output path (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json");
  cmd->add_option("--quad-nodes", o.quad_nodes, "Initial Gauss-Legendre nodes")
      ->capture_default_str()
      ->check(CLI::Range(16, 1 << 20));
  cmd->add_option("--quad-rtol", o.quad_rtol, "Relative quadrature tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--quad-atol", o.quad_atol, "Absolute quadrature tolerance")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--eps-leak", o.eps_leak, "Malus leakage epsilon")->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hidden-variable polarizer transmission model"};
  app.name("hvpol");
  app.require_subcommand(1);
  Options o;

  auto* pair = app.add_subcommand("eval-pair", "Pair transmission curve (p1, p2_norm, d, malus)");
  add_shared_flags(pair, o);
  pair->add_option("--profile", o.profile, "hv or belifante")->capture_default_str();

  auto* triple = app.add_subcommand("eval-triple", "Three-polarizer curve, HV model vs QM");
  add_shared_flags(triple, o);
  triple->add_option("--beta", o.beta_deg, "Third polarizer angle (deg)")->capture_default_str();

  auto* shrink = app.add_subcommand("eval-shrinkage", "Shift-model curves and total transmissions");
  add_shared_flags(shrink, o);
  shrink->add_option("--totals-out", o.totals_out, "Path of the JSON totals record");

  auto* fit = app.add_subcommand("fit", "Fit profile parameters to the Malus law");
  add_shared_flags(fit, o);
  fit->add_option("--model", o.fit_model, "simple or shrinkage")->capture_default_str();
  fit->add_option("--starts", o.starts, "Multi-start count")->capture_default_str()->check(CLI::PositiveNumber);
  fit->add_option("--max-iter", o.max_iter, "Simplex iteration cap")->capture_default_str()->check(CLI::PositiveNumber);

  auto* epr = app.add_subcommand("epr", "CHSH value of the HV model or the QM reference");
  add_shared_flags(epr, o);
  epr->add_option("--mode", o.epr_mode, "chsh or scan")->capture_default_str();
  epr->add_option("--model", o.epr_model, "hv or qm")->capture_default_str();
  epr->add_option("--settings", o.settings, "a,a',b,b' in degrees")->capture_default_str();
  epr->add_option("--step-deg", o.step_deg, "Scan lattice step (deg)")->capture_default_str();
  epr->add_option("--source", o.source, "parallel or perpendicular")->capture_default_str();

  auto* mc = app.add_subcommand("mc", "Photon Monte Carlo estimate");
  add_shared_flags(mc, o);
  mc->add_option("--kind", o.mc_kind, "pair, triple, shrinkage or coincidence")->capture_default_str();
  mc->add_option("--alpha", o.alpha_deg, "Second polarizer angle (deg)")->capture_default_str();
  mc->add_option("--beta", o.beta_deg, "Third polarizer / second analyzer angle (deg)")->capture_default_str();
  mc->add_option("--samples", o.samples, "Photon count")->capture_default_str()->check(CLI::PositiveNumber);
  mc->add_option("--streams", o.streams, "Independent Philox streams")->capture_default_str()->check(CLI::PositiveNumber);
  mc->add_flag("--check-quadrature", o.check_quadrature, "Also report the quadrature value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "hvpol: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    CLI::App* cmd = app.get_subcommands().front();
    if (!o.params_file.empty()) apply_params_file(o, *cmd);
    const std::string name = cmd->get_name();
    if (name == "eval-pair") cmd_eval_pair(o, out);
    else if (name == "eval-triple") cmd_eval_triple(o, out);
    else if (name == "eval-shrinkage") cmd_eval_shrinkage(o, out);
    else if (name == "fit") cmd_fit(o, out);
    else if (name == "epr") cmd_epr(o, out);
    else if (name == "mc") cmd_mc(o, out);
  } catch (const ConfigError& e) {
    err << "hvpol: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "hvpol: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericError& e) {
    err << "hvpol: numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}

}  // namespace hvpol::cli
