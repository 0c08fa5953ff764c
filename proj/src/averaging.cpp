#include "subharmonic/averaging.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "subharmonic/bessel.hpp"
#include "subharmonic/errors.hpp"

namespace subharmonic {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int legs(const AveragedModel& m) { return (1 + m.label.r) * m.label.n; }
int photons(const AveragedModel& m) { return (1 + m.label.r) * m.label.m; }

int cutoff(double R, const AveragedModel& m) {
  if (m.bessel_cutoff > 0) return m.bessel_cutoff;
  return static_cast<int>(std::ceil(std::abs(R) + std::abs(m.xi_d))) + 20;
}

// Series coefficients a_k = J_{1+kL}(R) J_{-kM}(xi) and their R-derivatives
// for the k range that survives the cutoff.
struct SeriesTerms {
  int k_min = 0, k_max = 0;
  std::vector<double> a, da;
};

SeriesTerms series_terms(double R, const AveragedModel& m) {
  const int L = legs(m), M = photons(m);
  const int N = cutoff(R, m);
  const BesselTable jr(N + 2, R);
  const BesselTable jx(N, m.xi_d);
  SeriesTerms t;
  t.k_max = std::min((N - 1) / L, N / M);
  t.k_min = -std::min((N + 1) / L, N / M);
  for (int k = t.k_min; k <= t.k_max; ++k) {
    const int nu = 1 + k * L;
    const double jxk = jx.at(-k * M);
    t.a.push_back(jr.at(nu) * jxk);
    t.da.push_back(0.5 * (jr.at(nu - 1) - jr.at(nu + 1)) * jxk);
  }
  return t;
}

struct GHDerivs {
  double g, h, g_theta, h_theta, g_r, h_r;
};

GHDerivs evaluate(double theta, const SeriesTerms& t, int L) {
  GHDerivs d{0, 0, 0, 0, 0, 0};
  for (int k = t.k_min; k <= t.k_max; ++k) {
    const std::size_t i = static_cast<std::size_t>(k - t.k_min);
    const double arg = k * L * theta;
    const double c = std::cos(arg), s = std::sin(arg);
    d.g += c * t.a[i];
    d.h -= s * t.a[i];
    d.g_theta -= k * L * s * t.a[i];
    d.h_theta -= k * L * c * t.a[i];
    d.g_r += c * t.da[i];
    d.h_r -= s * t.da[i];
  }
  return d;
}

void check_model(const AveragedModel& m) {
  if (m.label.n < 1 || m.label.m < 1 || m.label.r < 0 || m.label.r > 1)
    fail(ErrorCode::InvalidArgument, "invalid resonance label");
  if (!(m.kappa >= 0.0)) fail(ErrorCode::InvalidArgument, "kappa must be >= 0");
  if (!std::isfinite(m.beta_tilde) || !std::isfinite(m.xi_d))
    fail(ErrorCode::InvalidArgument, "beta_tilde and xi_d must be finite");
}

// Trapezoid rule over psi in [0, 2 pi), doubling until every component
// changes by at most rel_tol relative to the largest one.
template <int K, typename F>
std::array<double, K> periodic_average(F&& integrand, double rel_tol, int start = 64) {
  auto sum_at = [&](int count, int stride_offset, int stride) {
    std::array<double, K> acc{};
    for (int i = stride_offset; i < count; i += stride) {
      const std::array<double, K> v = integrand(2.0 * kPi * i / count);
      for (int c = 0; c < K; ++c) acc[c] += v[c];
    }
    return acc;
  };
  int count = start;
  std::array<double, K> total = sum_at(count, 0, 1);
  std::array<double, K> avg{};
  for (int c = 0; c < K; ++c) avg[c] = total[c] / count;
  for (int it = 0; it < 16; ++it) {
    // New midpoints are the odd indices of the doubled grid.
    const std::array<double, K> odd = sum_at(2 * count, 1, 2);
    count *= 2;
    std::array<double, K> next{};
    double change = 0.0, scale = 0.0;
    for (int c = 0; c < K; ++c) {
      total[c] += odd[c];
      next[c] = total[c] / count;
      change = std::max(change, std::abs(next[c] - avg[c]));
      scale = std::max(scale, std::abs(next[c]));
    }
    avg = next;
    if (change <= rel_tol * scale || change <= 1e-15) break;
  }
  return avg;
}

}  // namespace

GH gh_series(double theta, double R, const AveragedModel& model) {
  check_model(model);
  if (!(R >= 0.0)) fail(ErrorCode::InvalidArgument, "R must be >= 0");
  const GHDerivs d = evaluate(theta, series_terms(R, model), legs(model));
  return {d.g, d.h};
}

double g_func(double theta, double R, const AveragedModel& model) { return gh_series(theta, R, model).g; }
double h_func(double theta, double R, const AveragedModel& model) { return gh_series(theta, R, model).h; }

GH gh_quadrature(double theta, double R, const AveragedModel& model, double rel_tol) {
  check_model(model);
  const int m = model.label.m, n = model.label.n;
  const auto avg = periodic_average<2>(
      [&](double psi) {
        const double slow = m * psi + theta;
        const double sz = std::sin(R * std::sin(slow) + model.xi_d * std::sin(n * psi));
        return std::array<double, 2>{std::sin(slow) * sz, -std::cos(slow) * sz};
      },
      rel_tol);
  return {avg[0], avg[1]};
}

Vec2 averaged_vector_field(double u, double v, double delta, const AveragedModel& model) {
  check_model(model);
  const double R = std::hypot(u, v);
  double su, cu;
  if (R < 1e-8) {
    // theta is undefined here; average the Cartesian integrands directly.
    const int m = model.label.m, n = model.label.n;
    const auto avg = periodic_average<2>(
        [&](double psi) {
          const double s = std::sin(m * psi), c = std::cos(m * psi);
          const double sz = std::sin(u * c + v * s + model.xi_d * std::sin(n * psi));
          return std::array<double, 2>{s * sz, c * sz};
        },
        1e-13);
    su = avg[0];
    cu = avg[1];
  } else {
    const double theta = std::atan2(u, v);
    const GH gh = gh_series(theta, R, model);
    su = gh.h * std::sin(theta) + gh.g * std::cos(theta);
    cu = gh.g * std::sin(theta) - gh.h * std::cos(theta);
  }
  return {-model.kappa * u + delta * v + model.beta_tilde * su,
          -model.kappa * v - delta * u - model.beta_tilde * cu};
}

double rotation_rate(double theta, double R, double delta, const AveragedModel& model) {
  if (!(R > 0.0)) fail(ErrorCode::InvalidArgument, "rotation rate needs R > 0");
  return delta + model.beta_tilde * g_func(theta, R, model) / R;
}

std::vector<RadiusRoot> equilibria_at_radius(double r_star, const AveragedModel& model, int grid_points) {
  check_model(model);
  if (!(r_star > 0.0)) fail(ErrorCode::InvalidArgument, "r_star must be > 0");
  if (grid_points < 8) fail(ErrorCode::InvalidArgument, "grid_points must be >= 8");
  const int L = legs(model);
  const SeriesTerms terms = series_terms(r_star, model);
  const double sector = 2.0 * kPi / L;
  auto radial = [&](double th) { return -model.kappa * r_star + model.beta_tilde * evaluate(th, terms, L).h; };
  auto detune = [&](double th) { return -model.beta_tilde * evaluate(th, terms, L).g / r_star; };

  std::vector<double> f(grid_points + 1);
  for (int i = 0; i <= grid_points; ++i) f[i] = radial(sector * i / grid_points);
  const double zero_tol = 1e-14 * (model.kappa * r_star + std::abs(model.beta_tilde));

  std::vector<RadiusRoot> roots;
  for (int i = 0; i < grid_points; ++i) {
    const double a = sector * i / grid_points;
    const double b = sector * (i + 1) / grid_points;
    if (std::abs(f[i]) <= zero_tol) {
      roots.push_back({a, detune(a)});
      continue;
    }
    if (std::abs(f[i + 1]) <= zero_tol) continue;
    if ((f[i] < 0.0) == (f[i + 1] < 0.0)) continue;
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t iters = 200;
    const auto bracket = boost::math::tools::bisect(radial, a, b, tol, iters);
    const double th = 0.5 * (bracket.first + bracket.second);
    roots.push_back({th, detune(th)});
  }
  return roots;
}

const char* to_string(EquilibriumType t) { return t == EquilibriumType::Node ? "Node" : "Saddle"; }

Equilibrium classify_stability(double theta_star, double r_star, double delta, const AveragedModel& model) {
  check_model(model);
  const int m = model.label.m, n = model.label.n;
  const double u = r_star * std::sin(theta_star), v = r_star * std::cos(theta_star);
  const auto avg = periodic_average<3>(
      [&](double psi) {
        const double s = std::sin(m * psi), c = std::cos(m * psi);
        const double cz = std::cos(u * c + v * s + model.xi_d * std::sin(n * psi));
        return std::array<double, 3>{s * c * cz, s * s * cz, c * c * cz};
      },
      1e-9);
  const double b = model.beta_tilde, k = model.kappa;
  Equilibrium e;
  e.theta_star = theta_star;
  e.r_star = r_star;
  e.delta = delta;
  e.jacobian << -k + b * avg[0], delta + b * avg[1], -delta - b * avg[2], -k - b * avg[0];
  const double tr = e.jacobian.trace(), det = e.jacobian.determinant();
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr / 4.0 - det));
  e.eigenvalues = {tr / 2.0 + disc, tr / 2.0 - disc};
  const double re_max = std::max(e.eigenvalues[0].real(), e.eigenvalues[1].real());

  std::ostringstream msg;
  if (k == 0.0) {
    if (std::max(std::abs(e.eigenvalues[0]), std::abs(e.eigenvalues[1])) <= 1e-8) {
      msg << "degenerate equilibrium (det = " << det << ")";
      fail(ErrorCode::MarginalStability, msg.str());
    }
    e.stability = det > 0.0 ? EquilibriumType::Node : EquilibriumType::Saddle;
    return e;
  }
  if (std::abs(re_max) <= 1e-8) {
    msg << "largest real part " << re_max << " is within 1e-8 of zero";
    fail(ErrorCode::MarginalStability, msg.str());
  }
  e.stability = re_max < 0.0 ? EquilibriumType::Node : EquilibriumType::Saddle;
  return e;
}

BifurcationScan bifurcation_scan(const AveragedModel& model, const std::vector<double>& r_grid) {
  check_model(model);
  for (std::size_t i = 1; i < r_grid.size(); ++i)
    if (!(r_grid[i] > r_grid[i - 1])) fail(ErrorCode::InvalidArgument, "r_grid must be increasing");
  const double sector = 2.0 * kPi / legs(model);
  BifurcationScan scan;
  scan.r_grid = r_grid;
  scan.delta_min = kNaN;
  scan.delta_max = kNaN;
  std::vector<BranchPoint> previous;
  int next_label = 0;
  for (double R : r_grid) {
    if (!(R > 0.0)) continue;
    std::vector<BranchPoint> current;
    for (const RadiusRoot& root : equilibria_at_radius(R, model)) {
      BranchPoint p;
      p.r_star = R;
      p.theta_star = root.theta;
      p.delta = root.delta;
      try {
        p.stability = classify_stability(root.theta, R, root.delta, model).stability;
      } catch (const Error& err) {
        if (err.code() != ErrorCode::MarginalStability) throw;
        ++scan.marginal_points;
        continue;
      }
      current.push_back(p);
    }
    // Continue labels by nearest angle (circular within the sector).
    std::vector<bool> used(previous.size(), false);
    for (BranchPoint& p : current) {
      int best = -1;
      double best_dist = 0.05 * sector;
      for (std::size_t j = 0; j < previous.size(); ++j) {
        if (used[j]) continue;
        double d = std::abs(p.theta_star - previous[j].theta_star);
        d = std::min(d, sector - d);
        if (d < best_dist) {
          best_dist = d;
          best = static_cast<int>(j);
        }
      }
      if (best >= 0) {
        used[best] = true;
        p.branch = previous[best].branch;
      } else {
        p.branch = next_label++;
      }
      scan.branches.push_back(p);
      if (p.stability == EquilibriumType::Node) {
        if (std::isnan(scan.delta_min) || p.delta < scan.delta_min) scan.delta_min = p.delta;
        if (std::isnan(scan.delta_max) || p.delta > scan.delta_max) scan.delta_max = p.delta;
      }
    }
    previous = current;
  }
  return scan;
}

std::vector<BranchPoint> saddle_node_points(const BifurcationScan& scan) {
  std::map<int, std::vector<const BranchPoint*>> by_branch;
  for (const BranchPoint& p : scan.branches) by_branch[p.branch].push_back(&p);
  std::vector<BranchPoint> out;
  for (const auto& [label, pts] : by_branch) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const BranchPoint& a = *pts[i - 1];
      const BranchPoint& b = *pts[i];
      if (a.stability == b.stability) continue;
      BranchPoint mid = b;
      mid.r_star = 0.5 * (a.r_star + b.r_star);
      mid.theta_star = 0.5 * (a.theta_star + b.theta_star);
      mid.delta = 0.5 * (a.delta + b.delta);
      out.push_back(mid);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const BranchPoint& x, const BranchPoint& y) { return x.r_star < y.r_star; });
  return out;
}

std::vector<Equilibrium> equilibria_at_detuning(double delta, const AveragedModel& model, int theta_cells,
                                                int radius_cells) {
  check_model(model);
  if (theta_cells < 8 || radius_cells < 8) fail(ErrorCode::InvalidArgument, "grid too coarse");
  const int L = legs(model);
  const double sector = 2.0 * kPi / L;
  const double b = model.beta_tilde, k = model.kappa;
  double r_max = delta != 0.0 ? std::abs(b) / std::abs(delta) + 1.0 : 50.0;
  r_max = std::min(r_max, 50.0);

  auto residual = [&](double th, double R, const SeriesTerms& t) {
    const GHDerivs d = evaluate(th, t, L);
    return std::array<double, 2>{delta * R + b * d.g, -k * R + b * d.h};
  };

  std::vector<SeriesTerms> terms(radius_cells + 1);
  std::vector<double> radii(radius_cells + 1);
  for (int j = 0; j <= radius_cells; ++j) {
    radii[j] = r_max * (j + 0.5) / (radius_cells + 0.5);
    terms[j] = series_terms(radii[j], model);
  }
  std::vector<std::array<double, 2>> grid((theta_cells + 1) * (radius_cells + 1));
  auto at = [&](int i, int j) -> std::array<double, 2>& { return grid[j * (theta_cells + 1) + i]; };
  for (int j = 0; j <= radius_cells; ++j)
    for (int i = 0; i <= theta_cells; ++i) at(i, j) = residual(sector * i / theta_cells, radii[j], terms[j]);

  std::vector<Equilibrium> out;
  auto known = [&](double th, double R) {
    for (const Equilibrium& e : out) {
      double d = std::abs(th - e.theta_star);
      d = std::min(d, sector - d);
      if (d < 1e-7 && std::abs(R - e.r_star) < 1e-7) return true;
    }
    return false;
  };
  for (int j = 0; j < radius_cells; ++j) {
    for (int i = 0; i < theta_cells; ++i) {
      bool straddles = true;
      for (int c = 0; c < 2; ++c) {
        const double v[4] = {at(i, j)[c], at(i + 1, j)[c], at(i, j + 1)[c], at(i + 1, j + 1)[c]};
        const double lo = *std::min_element(v, v + 4), hi = *std::max_element(v, v + 4);
        if (lo > 0.0 || hi < 0.0) straddles = false;
      }
      if (!straddles) continue;
      double th = sector * (i + 0.5) / theta_cells;
      double R = 0.5 * (radii[j] + radii[j + 1]);
      bool converged = false;
      for (int it = 0; it < 60; ++it) {
        const GHDerivs d = evaluate(th, series_terms(R, model), L);
        const double f1 = delta * R + b * d.g, f2 = -k * R + b * d.h;
        const double scale = std::abs(delta) * R + k * R + std::abs(b);
        if (std::hypot(f1, f2) <= 1e-13 * std::max(scale, 1e-300)) {
          converged = true;
          break;
        }
        Eigen::Matrix2d J;
        J << b * d.g_theta, delta + b * d.g_r, b * d.h_theta, -k + b * d.h_r;
        const double det = J.determinant();
        if (std::abs(det) < 1e-300) break;
        const Eigen::Vector2d step = J.inverse() * Eigen::Vector2d(f1, f2);
        double damp = 1.0;
        const double limit = 0.25 * sector;
        if (std::abs(step(0)) > limit) damp = limit / std::abs(step(0));
        th -= damp * step(0);
        R -= damp * step(1);
        if (!(R > 0.0) || R > 2.0 * r_max) break;
      }
      if (!converged || R < 1e-6) continue;
      th = std::fmod(th, sector);
      if (th < 0.0) th += sector;
      if (sector - th < 1e-12) th = 0.0;
      if (known(th, R)) continue;
      try {
        out.push_back(classify_stability(th, R, delta, model));
      } catch (const Error& err) {
        if (err.code() != ErrorCode::MarginalStability) throw;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Equilibrium& x, const Equilibrium& y) {
    return x.r_star != y.r_star ? x.r_star < y.r_star : x.theta_star < y.theta_star;
  });
  return out;
}

int index_balance(const std::vector<Equilibrium>& sector_equilibria, const AveragedModel& model, double delta) {
  const int L = legs(model);
  int nodes = 0, saddles = 0;
  for (const Equilibrium& e : sector_equilibria) (e.stability == EquilibriumType::Node ? nodes : saddles)++;
  int origin = 0;
  if (L >= 2) {
    // Linearization at the origin: -kappa +- i (delta + beta_tilde J_0(xi_d) / 2).
    const double rot = delta + 0.5 * model.beta_tilde * bessel_j(0, model.xi_d);
    origin = (model.kappa > 0.0 || rot != 0.0) ? 1 : 0;
  }
  return L * nodes + origin - L * saddles;
}

std::vector<RegionRow> resonance_region(const AveragedModel& model, const std::vector<double>& xi_grid,
                                        const std::vector<double>& r_grid) {
  for (std::size_t i = 1; i < xi_grid.size(); ++i)
    if (!(xi_grid[i] > xi_grid[i - 1])) fail(ErrorCode::InvalidArgument, "xi_grid must be increasing");
  std::vector<RegionRow> rows;
  for (double xi : xi_grid) {
    AveragedModel m = model;
    m.xi_d = xi;
    const BifurcationScan scan = bifurcation_scan(m, r_grid);
    RegionRow row;
    row.xi_d = xi;
    row.delta_min = scan.delta_min;
    row.delta_max = scan.delta_max;
    row.nu_d_min = std::isnan(scan.delta_max) ? kNaN : drive_frequency_from_detuning(model.label, scan.delta_max);
    row.nu_d_max = std::isnan(scan.delta_min) ? kNaN : drive_frequency_from_detuning(model.label, scan.delta_min);
    rows.push_back(row);
  }
  return rows;
}

double ac_stark(double xi_d, double beta_tilde) { return 0.5 * beta_tilde * (bessel_j(0, xi_d) - 1.0); }

double resonant_drive_frequency(const ResonanceLabel& label, double beta, double xi_d) {
  return static_cast<double>(label.n) / label.m * (1.0 + 0.5 * beta * bessel_j(0, xi_d));
}

double resonance_threshold_kappa(const ResonanceLabel& label, double beta_tilde, double xi_d) {
  const int M = (1 + label.r) * label.m;
  return beta_tilde * std::pow(std::abs(xi_d), M) / (std::pow(2.0, M - 1) * std::tgamma(M + 1.0));
}

std::vector<std::complex<double>> alpha_from_equilibrium(double theta_star, double r_star, double lambda,
                                                         const ResonanceLabel& label) {
  if (!(lambda > 0.0)) fail(ErrorCode::InvalidArgument, "lambda must be > 0");
  const int L = label.legs();
  std::vector<std::complex<double>> out;
  for (int l = 0; l < L; ++l)
    out.push_back(std::complex<double>(0.0, 1.0) * std::polar(r_star / (2.0 * lambda), -(2.0 * kPi * l / L + theta_star)));
  return out;
}

}  // namespace subharmonic
