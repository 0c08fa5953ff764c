#include "subharmonic/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>

#include "parallel.hpp"
#include "subharmonic/averaging.hpp"
#include "subharmonic/bounds.hpp"
#include "subharmonic/classical.hpp"
#include "subharmonic/csv.hpp"
#include "subharmonic/errors.hpp"

namespace subharmonic {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// ---------------------------------------------------------------------------
// Config sections

struct ModelFields {
  bool nu_d = true;
  bool xi_d = true;
  bool lambda = true;
};

NormalizedModel read_model(const ConfigNode& root, ModelFields need) {
  const ConfigNode m = root.child("model");
  m.expect_keys({"beta", "lambda", "nu_d", "xi_d", "q_tilde"});
  NormalizedModel model;
  model.beta = m.number("beta");
  model.lambda = need.lambda ? m.number("lambda") : m.number_or("lambda", 1.0);
  model.nu_d = need.nu_d ? m.number("nu_d") : m.number_or("nu_d", 1.0);
  model.xi_d = need.xi_d ? m.number("xi_d") : m.number_or("xi_d", 0.0);
  model.q_tilde = m.extended_number_or("q_tilde", kInfinity);
  try {
    validate(model);
  } catch (const Error& e) {
    fail(ErrorCode::ConfigError, "model: " + std::string(e.what()));
  }
  return model;
}

ResonanceLabel read_resonance(const ConfigNode& root) {
  const ConfigNode r = root.child("resonance");
  r.expect_keys({"n", "m"});
  try {
    return make_resonance(r.integer("n"), r.integer("m"));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ConfigError) throw;
    fail(ErrorCode::ConfigError, "resonance: " + std::string(e.what()));
  }
}

std::optional<ResonanceLabel> read_optional_resonance(const ConfigNode& root) {
  if (!root.has("resonance")) return std::nullopt;
  return read_resonance(root);
}

QuantumSettings read_quantum(const ConfigNode& root) {
  QuantumSettings s;
  if (const auto q = root.find("quantum")) {
    q->expect_keys({"dim", "steps_per_period", "n_samples", "sampled_modes", "m_max", "convergence_tol",
                    "max_doublings", "adaptive"});
    s.dim = q->integer_or("dim", s.dim);
    s.propagator.steps_per_period = q->integer_or("steps_per_period", s.propagator.steps_per_period);
    s.propagator.n_samples = q->integer_or("n_samples", s.propagator.n_samples);
    s.propagator.convergence_tol = q->number_or("convergence_tol", s.propagator.convergence_tol);
    s.propagator.max_doublings = q->integer_or("max_doublings", s.propagator.max_doublings);
    s.propagator.adaptive = q->boolean_or("adaptive", s.propagator.adaptive);
    s.decompose.sampled_modes = q->integer_or("sampled_modes", s.decompose.sampled_modes);
    s.bath.m_max = q->integer_or("m_max", s.bath.m_max);
  }
  if (const auto b = root.find("bath")) {
    b->expect_keys({"j_const", "t_bath"});
    s.bath.j_const = b->number_or("j_const", s.bath.j_const);
    s.bath.t_bath = b->number_or("t_bath", s.bath.t_bath);
  }
  auto bad = [](const char* what) { fail(ErrorCode::ConfigError, std::string("quantum: ") + what); };
  if (s.dim < kMinimumDimension) bad("dim must be >= 16");
  if (s.propagator.n_samples < 4 || s.propagator.n_samples % 4 != 0) bad("n_samples must be a positive multiple of 4");
  if (s.propagator.steps_per_period < s.propagator.n_samples ||
      s.propagator.steps_per_period % s.propagator.n_samples != 0)
    bad("steps_per_period must be a multiple of n_samples");
  if (s.propagator.max_doublings < 0) bad("max_doublings must be >= 0");
  if (!(s.propagator.convergence_tol > 0.0)) bad("convergence_tol must be > 0");
  if (s.decompose.sampled_modes < 1) bad("sampled_modes must be >= 1");
  if (s.bath.m_max < 1) bad("m_max must be >= 1");
  if (s.propagator.n_samples < 4 * s.bath.m_max) bad("n_samples must be >= 4 m_max");
  if (!(s.bath.j_const > 0.0)) bad("bath.j_const must be > 0");
  if (!(s.bath.t_bath >= 0.0)) bad("bath.t_bath must be >= 0");
  return s;
}

GridSpec read_grid(const ConfigNode& node) {
  node.expect_keys({"x", "p"});
  const RangeSpec x = node.range("x"), p = node.range("p");
  GridSpec g;
  g.x_min = x.min;
  g.x_max = x.max;
  g.nx = x.steps;
  g.p_min = p.min;
  g.p_max = p.max;
  g.np = p.steps;
  return g;
}

AveragedModel read_averaged(const ConfigNode& node, const ResonanceLabel& label, bool need_xi) {
  AveragedModel m;
  m.label = label;
  m.beta_tilde = node.number("beta_tilde");
  m.kappa = node.number_or("kappa", 0.0);
  m.xi_d = need_xi ? node.number("xi_d") : node.number_or("xi_d", 0.0);
  m.bessel_cutoff = node.integer_or("bessel_cutoff", 0);
  if (m.kappa < 0.0) fail(ErrorCode::ConfigError, "'" + node.path() + ".kappa' must be >= 0");
  if (m.bessel_cutoff < 0) fail(ErrorCode::ConfigError, "'" + node.path() + ".bessel_cutoff' must be >= 0");
  return m;
}

std::vector<double> positive_grid(const ConfigNode& node, const std::string& key, RangeSpec fallback) {
  const RangeSpec r = node.range_or(key, fallback);
  if (!(r.min > 0.0)) fail(ErrorCode::ConfigError, "'" + node.path() + "." + key + ".min' must be > 0");
  return r.values();
}

// ---------------------------------------------------------------------------
// Output helpers

std::string output_path(const RunOptions& opt, const std::string& name) {
  return (fs::path(opt.out_dir) / name).string();
}

void write_json(const std::string& path, const json& j, RunReport& report) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorCode::IoError, "cannot write '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) fail(ErrorCode::IoError, "write to '" + path + "' failed");
  report.files.push_back(path);
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json model_json(const NormalizedModel& m) {
  return {{"beta", m.beta},
          {"lambda", m.lambda},
          {"nu_d", m.nu_d},
          {"xi_d", m.xi_d},
          {"q_tilde", m.hamiltonian() ? json("inf") : json(m.q_tilde)}};
}

struct PointOutcome {
  std::vector<CsvField> fields;
  bool failed = false;
};

// Rows of an earlier run keyed by their leading key columns.
std::map<std::vector<std::string>, std::vector<std::string>> previous_rows(const std::string& path,
                                                                            const std::string& schema,
                                                                            std::size_t key_columns,
                                                                            std::size_t width) {
  std::map<std::vector<std::string>, std::vector<std::string>> rows;
  if (!fs::exists(path)) return rows;
  const CsvTable t = read_csv(path);
  if (t.schema != schema || t.columns.size() != width) return rows;
  for (const auto& r : t.rows) {
    if (r.size() != width) continue;
    rows[std::vector<std::string>(r.begin(), r.begin() + static_cast<long>(key_columns))] = r;
  }
  return rows;
}

// Runs `compute` for every key not already present, then writes all rows in
// grid order so the file is independent of scheduling and resumption.
template <class Compute>
void run_scan(const std::string& path, const std::string& schema, const std::vector<std::string>& columns,
              const std::vector<std::vector<double>>& keys, const RunOptions& opt, RunReport& report,
              const std::string& status_column, Compute&& compute) {
  const std::size_t key_cols = keys.empty() ? 0 : keys.front().size();
  auto key_text = [](const std::vector<double>& k) {
    std::vector<std::string> s;
    for (double v : k) s.push_back(format_number(v));
    return s;
  };
  const auto old = opt.resume ? previous_rows(path, schema, key_cols, columns.size())
                              : std::map<std::vector<std::string>, std::vector<std::string>>{};
  const auto status_it = std::find(columns.begin(), columns.end(), status_column);
  const std::size_t status_idx = static_cast<std::size_t>(status_it - columns.begin());

  std::vector<std::optional<std::vector<std::string>>> reused(keys.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto it = old.find(key_text(keys[i]));
    // Failed rows are recomputed on resume.
    if (it != old.end() && status_idx < columns.size() && (it->second[status_idx] == "Unique" ||
                                                           it->second[status_idx] == "Inconclusive" ||
                                                           it->second[status_idx] == "ok"))
      reused[i] = it->second;
    else
      todo.push_back(i);
  }
  std::vector<PointOutcome> fresh(keys.size());
  detail::parallel_for(todo.size(), opt.workers, [&](std::size_t t) {
    const std::size_t i = todo[t];
    fresh[i] = compute(keys[i]);
  });

  CsvWriter out(path, schema, columns);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (reused[i]) {
      out.row(std::vector<CsvField>(reused[i]->begin(), reused[i]->end()));
      ++report.resumed;
    } else {
      out.row(fresh[i].fields);
      if (fresh[i].failed) ++report.failed;
    }
    ++report.points;
  }
  out.close();
  report.files.push_back(path);
}

// ---------------------------------------------------------------------------
// floquet-spectrum

RunReport cmd_floquet_spectrum(const ConfigNode& cfg, const RunOptions& opt) {
  cfg.expect_keys({"model", "resonance", "quantum", "bath", "phase_space"});
  const NormalizedModel model = read_model(cfg, {});
  const std::optional<ResonanceLabel> label = read_optional_resonance(cfg);
  const QuantumSettings qs = read_quantum(cfg);
  std::optional<GridSpec> grid;
  if (const auto ps = cfg.find("phase_space")) grid = read_grid(*ps);

  RunReport report;
  const FockOperators ops = build_operators(qs.dim, model.lambda);
  const QuantumPoint qp = solve_quantum_point(model, ops, qs);
  const FloquetDecomposition& d = qp.decomp;

  std::vector<int> cats;
  json cat_info = nullptr;
  if (label) {
    cats = cat_manifold_modes(qp.steady, d, *label);
    json info;
    info["modes"] = cats;
    if (!cats.empty()) {
      const double modulus = d.nu_d / label->n;
      double spread = 0.0;
      for (int a : cats)
        for (int b : cats)
          spread = std::max(spread, folded_distance(d.quasienergies(a) - d.quasienergies(b), modulus));
      info["quasienergy_spread_mod_nu_over_n"] = spread;
      info["degenerate"] = spread <= 1e-3;
      try {
        const CatFit fit = cat_fidelity(d, cats, *label);
        info["alpha"] = {fit.alpha.real(), fit.alpha.imag()};
        info["fidelities"] = fit.fidelities;
        info["mean_fidelity"] = fit.mean_fidelity;
        info["gap"] = quasienergy_gap(d, cats, *label, ops);
      } catch (const Error& e) {
        info["error"] = to_string(e.code());
        info["message"] = e.what();
      }
    }
    cat_info = info;
  }

  const std::string spectrum = output_path(opt, "spectrum.csv");
  CsvWriter out(spectrum, "floquet-spectrum/1",
                {"mode_index", "quasienergy", "mean_photons", "p_r", "parity", "cat_manifold"});
  const std::set<int> cat_set(cats.begin(), cats.end());
  for (Eigen::Index r = 0; r < d.quasienergies.size(); ++r) {
    const double pop = r < qp.steady.probabilities.size() ? qp.steady.probabilities(r) : 0.0;
    out.row({static_cast<long long>(r), d.quasienergies(r), d.mean_photons(r), pop,
             static_cast<long long>(d.parity_sign[static_cast<std::size_t>(r)]),
             static_cast<long long>(cat_set.count(static_cast<int>(r)))});
  }
  out.close();
  report.files.push_back(spectrum);
  report.points = static_cast<int>(d.quasienergies.size());

  json summary = {{"model", model_json(model)},
                  {"dim", qs.dim},
                  {"n_samples", d.n_samples},
                  {"retained_modes", d.retained()},
                  {"steps_per_period", qp.propagator.steps_used},
                  {"unitarity_defect", qp.propagator.unitarity_defect},
                  {"convergence_change", qp.propagator.convergence_change},
                  {"converged", d.convergence_flag},
                  {"degenerate_pairs", d.degenerate_pairs},
                  {"n_occ", qp.steady.n_occ},
                  {"entropy", qp.steady.entropy},
                  {"kernel_status", to_string(qp.steady.status)},
                  {"cat_manifold", cat_info}};
  if (label) summary["resonance"] = {{"n", label->n}, {"m", label->m}, {"r", label->r}};

  if (grid) {
    const CMatrix rho = asymptotic_state(qp.steady, d, 0.0);
    const PhaseSpaceGrid w = wigner(rho, *grid);
    const PhaseSpaceGrid q = husimi_q(rho, *grid);
    for (const auto& [name, g] : {std::pair<const char*, const PhaseSpaceGrid*>{"wigner.csv", &w},
                                  std::pair<const char*, const PhaseSpaceGrid*>{"husimi.csv", &q}}) {
      const std::string path = output_path(opt, name);
      CsvWriter pw(path, std::string("phase-space/1;") + (name[0] == 'w' ? "wigner" : "husimi"), {"x", "p", "value"});
      for (int i = 0; i < g->spec.nx; ++i)
        for (int j = 0; j < g->spec.np; ++j) pw.row({g->x_at(i), g->p_at(j), g->values(i, j)});
      pw.close();
      report.files.push_back(path);
    }
  }
  write_json(output_path(opt, "floquet.json"), summary, report);
  return report;
}

// ---------------------------------------------------------------------------
// nocc-map

RunReport cmd_nocc_map(const ConfigNode& cfg, const RunOptions& opt) {
  cfg.expect_keys({"model", "quantum", "bath", "scan"});
  const NormalizedModel base = read_model(cfg, {false, false, true});
  const QuantumSettings qs = read_quantum(cfg);
  const ConfigNode scan = cfg.child("scan");
  scan.expect_keys({"nu_d", "xi_d"});
  const std::vector<double> nus = scan.range("nu_d").values();
  const std::vector<double> xis = scan.range("xi_d").values();
  for (double nu : nus)
    if (!(nu > 0.0)) fail(ErrorCode::ConfigError, "'scan.nu_d' values must be > 0");

  std::vector<std::vector<double>> keys;
  for (double xi : xis)
    for (double nu : nus) keys.push_back({nu, xi});

  RunReport report;
  const FockOperators ops = build_operators(qs.dim, base.lambda);
  run_scan(output_path(opt, "nocc_map.csv"), "nocc-map/1", {"nu_d", "xi_d", "n_occ", "status"}, keys, opt, report,
           "status", [&](const std::vector<double>& k) {
             NormalizedModel m = base;
             m.nu_d = k[0];
             m.xi_d = k[1];
             PointOutcome o;
             try {
               const QuantumPoint qp = solve_quantum_point(m, ops, qs);
               o.fields = {k[0], k[1], qp.steady.n_occ, std::string(to_string(qp.steady.status))};
             } catch (const Error& e) {
               o.fields = {k[0], k[1], kNaN, std::string(to_string(e.code()))};
               o.failed = true;
             }
             return o;
           });
  return report;
}

// ---------------------------------------------------------------------------
// poincare

RunReport cmd_poincare(const ConfigNode& cfg, const RunOptions& opt) {
  cfg.expect_keys({"model", "poincare"});
  const NormalizedModel model = read_model(cfg, {true, true, false});
  const ConfigNode pc = cfg.child("poincare");
  pc.expect_keys({"seeds", "seed_grid", "iterations", "lyapunov_periods", "escape_radius", "orbits"});
  std::vector<State2> seeds;
  if (pc.has("seeds"))
    for (const auto& [x, p] : pc.pair_list("seeds")) seeds.push_back({x, p});
  if (const auto g = pc.find("seed_grid")) {
    g->expect_keys({"x", "p"});
    for (double p : g->range("p").values())
      for (double x : g->range("x").values()) seeds.push_back({x, p});
  }
  const bool has_orbits = pc.has("orbits");
  if (seeds.empty() && !has_orbits) fail(ErrorCode::ConfigError, "missing key 'poincare.seeds'");
  const int iterations = pc.integer_or("iterations", 300);
  if (iterations < 1) fail(ErrorCode::ConfigError, "'poincare.iterations' must be >= 1");
  LyapunovSettings lyap;
  lyap.min_periods = pc.integer_or("lyapunov_periods", lyap.min_periods);
  lyap.escape_radius = pc.number_or("escape_radius", lyap.escape_radius);
  if (lyap.min_periods < 100) fail(ErrorCode::ConfigError, "'poincare.lyapunov_periods' must be >= 100");

  struct OrbitRequest {
    State2 guess;
    int n;
  };
  std::vector<OrbitRequest> requests;
  if (has_orbits) {
    for (const ConfigNode& o : pc.object_list("orbits")) {
      o.expect_keys({"guess", "n"});
      const auto g = o.pair_list("guess");
      requests.push_back({{g.front().first, g.front().second}, o.integer("n")});
      if (requests.back().n < 1) fail(ErrorCode::ConfigError, "'" + o.path() + ".n' must be >= 1");
    }
  }

  RunReport report;
  const ClassicalSystem sys = ClassicalSystem::from_frame(to_symmetric_frame(model));
  if (!seeds.empty()) {
    const std::vector<PortraitOrbit> orbits = phase_portrait(seeds, iterations, sys, lyap, {}, opt.workers);
    const std::string portrait = output_path(opt, "portrait.csv");
    const std::string summary = output_path(opt, "portrait_seeds.csv");
    CsvWriter pw(portrait, "portrait/1", {"seed_index", "iter", "x", "p"});
    CsvWriter sw(summary, "portrait-seeds/1", {"seed_index", "seed_x", "seed_p", "lyapunov", "class"});
    for (std::size_t i = 0; i < orbits.size(); ++i) {
      const PortraitOrbit& o = orbits[i];
      for (std::size_t k = 0; k < o.iterates.size(); ++k)
        pw.row({static_cast<long long>(i), static_cast<long long>(k), o.iterates[k].x, o.iterates[k].p});
      sw.row({static_cast<long long>(i), o.seed.x, o.seed.p, o.lyapunov_estimate,
              std::string(to_string(o.classification))});
      ++report.points;
    }
    pw.close();
    sw.close();
    report.files.push_back(portrait);
    report.files.push_back(summary);
  }
  if (!requests.empty()) {
    const std::string path = output_path(opt, "orbits.csv");
    CsvWriter ow(path, "orbits/1",
                 {"n", "m", "symmetry", "residual", "mult_re1", "mult_im1", "mult_re2", "mult_im2", "lyapunov", "status"});
    std::vector<PointOutcome> rows(requests.size());
    detail::parallel_for(requests.size(), opt.workers, [&](std::size_t i) {
      PointOutcome& o = rows[i];
      try {
        const PeriodicOrbit orbit = find_periodic_orbit(requests[i].guess, requests[i].n, sys);
        double lyap_value = kNaN;
        try {
          lyap_value = lyapunov_exponent(orbit.points.front(), lyap.min_periods, sys, lyap);
        } catch (const Error&) {
        }
        o.fields = {static_cast<long long>(orbit.n), static_cast<long long>(orbit.winding_m),
                    std::string(to_string(orbit.symmetry)), orbit.residual, orbit.multipliers[0].real(),
                    orbit.multipliers[0].imag(), orbit.multipliers[1].real(), orbit.multipliers[1].imag(),
                    lyap_value, std::string("ok")};
      } catch (const Error& e) {
        o.fields = {static_cast<long long>(requests[i].n), -1LL, std::string(""), kNaN, kNaN, kNaN, kNaN, kNaN, kNaN,
                    std::string(to_string(e.code()))};
        o.failed = true;
      }
    });
    for (const PointOutcome& o : rows) {
      ow.row(o.fields);
      ++report.points;
      if (o.failed) ++report.failed;
    }
    ow.close();
    report.files.push_back(path);
  }
  return report;
}

// ---------------------------------------------------------------------------
// averaged-equilibria

RunReport cmd_averaged(const ConfigNode& cfg, const RunOptions& opt) {
  cfg.expect_keys({"resonance", "averaged"});
  const ResonanceLabel label = read_resonance(cfg);
  const ConfigNode av = cfg.child("averaged");
  av.expect_keys({"beta_tilde", "kappa", "xi_d", "bessel_cutoff", "r_grid", "deltas"});
  const AveragedModel model = read_averaged(av, label, true);
  const std::vector<double> r_grid = positive_grid(av, "r_grid", {0.01, 12.0, 1200});
  const std::vector<double> deltas = av.has("deltas") ? av.number_list("deltas") : std::vector<double>{};

  RunReport report;
  const BifurcationScan scan = bifurcation_scan(model, r_grid);
  const std::string branches = output_path(opt, "branches.csv");
  CsvWriter bw(branches, "averaged-branches/1", {"R_star", "theta_star", "delta", "stability", "branch"});
  for (const BranchPoint& p : scan.branches) {
    bw.row({p.r_star, p.theta_star, p.delta, std::string(to_string(p.stability)), static_cast<long long>(p.branch)});
    ++report.points;
  }
  bw.close();
  report.files.push_back(branches);

  const std::vector<BranchPoint> sn = saddle_node_points(scan);
  const std::string sn_path = output_path(opt, "saddle_nodes.csv");
  CsvWriter sw(sn_path, "averaged-saddle-nodes/1", {"R_star", "theta_star", "delta"});
  json sn_json = json::array();
  for (const BranchPoint& p : sn) {
    sw.row({p.r_star, p.theta_star, p.delta});
    sn_json.push_back({{"R_star", p.r_star}, {"theta_star", p.theta_star}, {"delta", p.delta}});
  }
  sw.close();
  report.files.push_back(sn_path);

  json at_delta = json::array();
  if (!deltas.empty()) {
    const std::string path = output_path(opt, "equilibria.csv");
    CsvWriter ew(path, "averaged-equilibria/1",
                 {"delta", "R_star", "theta_star", "stability", "eig_re1", "eig_im1", "eig_re2", "eig_im2"});
    std::vector<std::vector<Equilibrium>> found(deltas.size());
    detail::parallel_for(deltas.size(), opt.workers,
                         [&](std::size_t i) { found[i] = equilibria_at_detuning(deltas[i], model); });
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      int nodes = 0, saddles = 0;
      for (const Equilibrium& e : found[i]) {
        ew.row({deltas[i], e.r_star, e.theta_star, std::string(to_string(e.stability)), e.eigenvalues[0].real(),
                e.eigenvalues[0].imag(), e.eigenvalues[1].real(), e.eigenvalues[1].imag()});
        (e.stability == EquilibriumType::Node ? nodes : saddles)++;
      }
      at_delta.push_back({{"delta", deltas[i]},
                          {"sector_nodes", nodes},
                          {"sector_saddles", saddles},
                          {"index_balance", index_balance(found[i], model, deltas[i])}});
    }
    ew.close();
    report.files.push_back(path);
  }
  json summary = {{"resonance", {{"n", label.n}, {"m", label.m}, {"r", label.r}}},
                  {"beta_tilde", model.beta_tilde},
                  {"kappa", model.kappa},
                  {"xi_d", model.xi_d},
                  {"delta_min", finite_or_null(scan.delta_min)},
                  {"delta_max", finite_or_null(scan.delta_max)},
                  {"marginal_points", scan.marginal_points},
                  {"saddle_nodes", sn_json},
                  {"detunings", at_delta}};
  write_json(output_path(opt, "averaged.json"), summary, report);
  return report;
}

// ---------------------------------------------------------------------------
// resonance-region

RunReport cmd_region(const ConfigNode& cfg, const RunOptions& opt) {
  cfg.expect_keys({"resonance", "averaged", "region"});
  const ResonanceLabel label = read_resonance(cfg);
  const ConfigNode av = cfg.child("averaged");
  av.expect_keys({"beta_tilde", "kappa", "bessel_cutoff"});
  const AveragedModel model = read_averaged(av, label, false);
  const ConfigNode rg = cfg.child("region");
  rg.expect_keys({"xi_d", "r_grid"});
  const std::vector<double> xis = rg.range("xi_d").values();
  const std::vector<double> r_grid = positive_grid(rg, "r_grid", {0.01, 12.0, 600});

  RunReport report;
  std::vector<std::vector<double>> keys;
  for (double xi : xis) keys.push_back({xi});
  run_scan(output_path(opt, "region.csv"), "resonance-region/1",
           {"xi_d", "delta_min", "delta_max", "nu_d_min", "nu_d_max", "status"}, keys, opt, report, "status",
           [&](const std::vector<double>& k) {
             PointOutcome o;
             try {
               const RegionRow row = resonance_region(model, {k[0]}, r_grid).front();
               o.fields = {row.xi_d, row.delta_min, row.delta_max, row.nu_d_min, row.nu_d_max, std::string("ok")};
             } catch (const Error& e) {
               o.fields = {k[0], kNaN, kNaN, kNaN, kNaN, std::string(to_string(e.code()))};
               o.failed = true;
             }
             return o;
           });

  const std::string ac = output_path(opt, "ac_stark.csv");
  CsvWriter aw(ac, "ac-stark/1", {"xi_d", "delta_ac", "nu_d"});
  for (double xi : xis)
    aw.row({xi, ac_stark(xi, model.beta_tilde), resonant_drive_frequency(label, model.beta_tilde, xi)});
  aw.close();
  report.files.push_back(ac);
  return report;
}

// ---------------------------------------------------------------------------
// chaos-bounds

RunReport cmd_bounds(const ConfigNode& cfg, const RunOptions& opt) {
  cfg.expect_keys({"model", "bounds"});
  const NormalizedModel model = read_model(cfg, {true, false, false});
  const ConfigNode b = cfg.child("bounds");
  b.expect_keys({"n_bar"});
  const int n_bar = b.integer("n_bar");
  if (n_bar < 2) fail(ErrorCode::ConfigError, "'bounds.n_bar' must be >= 2");

  RunReport report;
  const RegularityReport rep = classify_point(model, n_bar);
  std::string verdict = rep.contracting ? "contracting" : "not contracting";
  verdict += rep.pd_excluded_up_to == n_bar ? ", period doubling excluded" : ", pd bound exceeded";
  json out = {{"inputs", {{"model", model_json(model)}, {"n_bar", n_bar}}},
              {"contracting", rep.contracting},
              {"pd_excluded_up_to", rep.pd_excluded_up_to},
              {"subharmonic_excluded", rep.subharmonic_excluded},
              {"invariant_radius", finite_or_null(rep.invariant_radius)},
              {"beta_bound_contraction", rep.beta_bound_contraction},
              {"beta_bound_pd", rep.beta_bound_pd},
              {"combined_bound", combined_bound(rep.tau_bar)},
              {"tau_bar", rep.tau_bar},
              {"delta_bar_used", rep.delta_bar_used},
              {"delta_bar_coefficient", delta_bar_coefficient()},
              {"zones", rep.zones},
              {"summary", verdict}};
  write_json(output_path(opt, "bounds.json"), out, report);
  report.points = 1;
  return report;
}

// ---------------------------------------------------------------------------
// gap-scan

// Drive frequency at which the averaged model has a stable node of radius
// R* = 2 lambda sqrt(target_n); the node with the smallest |delta| is used.
double frequency_for_photon_number(const NormalizedModel& model, const ResonanceLabel& label, double target_n) {
  const SymmetricFrame frame = to_symmetric_frame(model);
  AveragedModel av;
  av.label = label;
  av.beta_tilde = frame.beta_tilde;
  av.kappa = frame.kappa;
  av.xi_d = frame.xi_d;
  const double r_star = 2.0 * model.lambda * std::sqrt(target_n);
  double best = kNaN;
  for (const RadiusRoot& root : equilibria_at_radius(r_star, av)) {
    try {
      if (classify_stability(root.theta, r_star, root.delta, av).stability != EquilibriumType::Node) continue;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MarginalStability) throw;
      continue;
    }
    if (std::isnan(best) || std::abs(root.delta) < std::abs(best)) best = root.delta;
  }
  if (std::isnan(best)) fail(ErrorCode::NoRoot, "no stable averaged equilibrium at the target photon number");
  return drive_frequency_from_detuning(label, best) * frame.s_scale;
}

RunReport cmd_gap_scan(const ConfigNode& cfg, const RunOptions& opt) {
  cfg.expect_keys({"model", "resonance", "quantum", "bath", "gap"});
  const NormalizedModel base = read_model(cfg, {false, true, false});
  const ResonanceLabel label = read_resonance(cfg);
  const QuantumSettings qs = read_quantum(cfg);
  const ConfigNode g = cfg.child("gap");
  g.expect_keys({"lambdas", "target_n", "nu_d"});
  const std::vector<double> lambdas = g.number_list("lambdas");
  const double target_n = g.number("target_n");
  if (!(target_n > 0.0)) fail(ErrorCode::ConfigError, "'gap.target_n' must be > 0");
  std::vector<double> nus;
  if (g.has("nu_d")) {
    nus = g.number_list("nu_d");
    if (nus.size() != lambdas.size())
      fail(ErrorCode::ConfigError, "'gap.nu_d' must have one entry per element of 'gap.lambdas'");
  }
  for (double l : lambdas)
    if (!(l > 0.0)) fail(ErrorCode::ConfigError, "'gap.lambdas' values must be > 0");

  std::vector<std::vector<double>> keys;
  for (double l : lambdas) keys.push_back({l});
  RunReport report;
  run_scan(output_path(opt, "gap_scan.csv"), "gap-scan/1",
           {"lambda", "nu_d", "target_n", "gap", "cat_fidelity", "mean_photons", "n_occ", "status"}, keys, opt,
           report, "status", [&](const std::vector<double>& k) {
             PointOutcome o;
             const std::size_t i = static_cast<std::size_t>(
                 std::find(lambdas.begin(), lambdas.end(), k[0]) - lambdas.begin());
             NormalizedModel m = base;
             m.lambda = k[0];
             double nu = kNaN;
             try {
               nu = nus.empty() ? frequency_for_photon_number(m, label, target_n) : nus[i];
               m.nu_d = nu;
               const FockOperators ops = build_operators(qs.dim, m.lambda);
               const QuantumPoint qp = solve_quantum_point(m, ops, qs);
               const std::vector<int> cats = cat_manifold_modes(qp.steady, qp.decomp, label);
               if (cats.empty()) fail(ErrorCode::NoCatManifold, "no populated cat manifold");
               const CatFit fit = cat_fidelity(qp.decomp, cats, label);
               double nbar = 0.0;
               for (int c : cats) nbar += qp.decomp.mean_photons(c) / static_cast<double>(cats.size());
               o.fields = {k[0], nu, target_n, quasienergy_gap(qp.decomp, cats, label, ops), fit.mean_fidelity, nbar,
                           qp.steady.n_occ, std::string("ok")};
             } catch (const Error& e) {
               o.fields = {k[0], nu, target_n, kNaN, kNaN, kNaN, kNaN, std::string(to_string(e.code()))};
               o.failed = true;
             }
             return o;
           });
  return report;
}

}  // namespace

QuantumPoint solve_quantum_point(const NormalizedModel& model, const FockOperators& ops,
                                 const QuantumSettings& settings) {
  QuantumPoint qp;
  qp.propagator = one_period_propagator(model, ops, settings.propagator);
  qp.decomp = floquet_decompose(qp.propagator, model.nu_d, settings.decompose);
  const TransitionElements elems = transition_elements(qp.decomp, settings.bath.m_max);
  const RMatrix L = golden_rule_rates(elems, qp.decomp, settings.bath);
  qp.steady = steady_state(rate_matrix(L));
  return qp;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"floquet-spectrum",  "nocc-map",        "poincare", "averaged-equilibria",
                                                 "resonance-region", "chaos-bounds", "gap-scan"};
  return names;
}

RunReport run_command(const std::string& name, const ConfigNode& config, const RunOptions& options) {
  if (options.workers < 1) fail(ErrorCode::ConfigError, "workers must be >= 1");
  std::error_code ec;
  fs::create_directories(options.out_dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create output directory '" + options.out_dir + "': " + ec.message());
  if (name == "floquet-spectrum") return cmd_floquet_spectrum(config, options);
  if (name == "nocc-map") return cmd_nocc_map(config, options);
  if (name == "poincare") return cmd_poincare(config, options);
  if (name == "averaged-equilibria") return cmd_averaged(config, options);
  if (name == "resonance-region") return cmd_region(config, options);
  if (name == "chaos-bounds") return cmd_bounds(config, options);
  if (name == "gap-scan") return cmd_gap_scan(config, options);
  fail(ErrorCode::ConfigError, "unknown command '" + name + "'");
}

}  // namespace subharmonic
