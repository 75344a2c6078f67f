// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "hydroelastic/bifurcation.hpp"
#include "hydroelastic/branch_io.hpp"
#include "hydroelastic/continuation.hpp"
#include "hydroelastic/flowfield.hpp"
#include "hydroelastic/residual.hpp"

using namespace hydroelastic;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

const auto kModel = quadratic_model(1.0, 1.0);

// 1 -----------------------------------------------------------------------
Outcome dispersion_roots() {
  double worst = 0.0, worst_floor = 0.0;
  int count = 0, over = 0;
  for (double h : {0.5, 1.0, 2.0}) {
    const auto geom = StripGeometry::make(h, 1.0, 32);
    for (int n = 1; n <= 32; ++n)
      for (double gam : {-5.0, -2.0, 0.0, 2.0, 5.0})
        for (Sign s : {Sign::plus, Sign::minus}) {
          const double lam = lambda_star(n, s, gam, kModel, geom);
          const double d = std::abs(dispersion(n, lam, gam, kModel, geom));
          if (d > 1e-10) ++over;
          if (d > worst) {
            worst = d;
            // Half a unit in the last place of lambda, times the slope of D.
            const double ulp = std::nextafter(std::abs(lam), INFINITY) - std::abs(lam);
            worst_floor = 0.5 * ulp * std::abs(dispersion_lambda_derivative(n, lam, gam, geom));
          }
          ++count;
        }
  }
  return {worst <= 1e-10, std::to_string(count) + " roots, max |D| = " + num(worst) + ", " + std::to_string(over) +
                              " above 1e-10; rounding floor of lambda at the worst root = " + num(worst_floor)};
}

// 2 -----------------------------------------------------------------------
Outcome resonance_suite() {
  const auto geom = StripGeometry::make(1.0, 1.0, 64);
  double worst_match = 0.0, min_other = INFINITY, min_third = INFINITY;
  for (int n = 1; n <= 8; ++n) {
    const double gs = std::sqrt(gamma_star_squared(n, 2 * n, kModel, geom));
    for (double gam : {gs, -gs}) {
      const Sign s = resonant_sign(n, 2 * n, gam, kModel, geom);
      const Sign o = s == Sign::plus ? Sign::minus : Sign::plus;
      const double lam = lambda_star(n, s, gam, kModel, geom);
      worst_match = std::max(worst_match, std::abs(lam - lambda_star(2 * n, s, gam, kModel, geom)));
      min_other = std::min(min_other, std::abs(lambda_star(n, o, gam, kModel, geom) - lambda_star(2 * n, o, gam, kModel, geom)));
      for (int k = 1; k <= 32; ++k) {
        if (k == n || k == 2 * n) continue;
        for (Sign t : {Sign::plus, Sign::minus})
          min_third = std::min(min_third, std::abs(lambda_star(k, t, gam, kModel, geom) - lam));
      }
    }
  }
  const bool ok = worst_match <= 1e-9 && min_other >= 1e-3 && min_third > 1e-6;
  return {ok, "max |l*_n - l*_2n| = " + num(worst_match) + ", opposite pair min gap = " + num(min_other) +
                  ", nearest third mode gap = " + num(min_third)};
}

// 3 -----------------------------------------------------------------------
Outcome linearization_oracle() {
  const auto geom = StripGeometry::make(1.0, 1.0, 64);
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> lam_d(-3.0, 3.0), gam_d(-4.0, 4.0);
  double worst = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const double lam = lam_d(rng), gam = gam_d(rng);
    const auto J = jacobian(SurfaceState::trivial(64, lam, gam), kModel, geom, JacobianMode::finite_difference);
    for (int i = 0; i <= 64; ++i) {
      for (int j = 0; j <= 64; ++j) {
        double expected = 0.0;
        if (i == j) expected = i == 0 ? -1.0 : -dispersion(i, lam, gam, kModel, geom);
        const double scale = std::max(1.0, i == 0 ? 1.0 : std::abs(dispersion(std::max(i, j == 0 ? 1 : j), lam, gam, kModel, geom)));
        worst = std::max(worst, std::abs(J(i, j) - expected) / scale);
      }
    }
  }
  return {worst <= 1e-6, "N = 64, 5 parameter pairs, max relative deviation = " + num(worst)};
}

// 4 -----------------------------------------------------------------------
Outcome trivial_identity() {
  const auto geom = StripGeometry::make(1.3, 0.8, 16);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  double worst_F = 0.0, worst_Q = 0.0, worst_rt = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double lam = u(rng), gam = u(rng);
    worst_F = std::max(worst_F, evaluate_F(SurfaceState::trivial(16, lam, gam), kModel, geom).coefficient_norm());
    const auto p = to_physical(lam, 0.0, gam, geom);
    const double lam_from_m = p.mass_flux / geom.h + gam * geom.h / 2.0;
    worst_Q = std::max(worst_Q, std::abs(p.bernoulli - (2 * geom.g * geom.h + lam * lam)) / std::max(1.0, p.bernoulli));
    worst_Q = std::max(worst_Q, std::abs(p.bernoulli - (2 * geom.g * geom.h + lam_from_m * lam_from_m)) / std::max(1.0, p.bernoulli));
    const auto r = from_physical(p.mass_flux, p.bernoulli, gam, geom);
    worst_rt = std::max({worst_rt, std::abs(r.lambda - lam) / std::max(1.0, std::abs(lam)),
                         std::abs(r.theta) / std::max(1.0, p.bernoulli)});
  }
  return {worst_F <= 1e-13 && worst_Q <= 1e-14 && worst_rt <= 1e-14,
          "max ||F|| = " + num(worst_F) + ", Q identity = " + num(worst_Q) + ", round trip = " + num(worst_rt)};
}

// 5 / 8 / 10 ---------------------------------------------------------------
const auto kBranchGeom = StripGeometry::make(1.0, 1.0, 32);

ContinuationOptions branch_options() {
  // Slightly under 1e-3 so that four points fall in s <= 4e-3 even though arclength also counts lambda.
  ContinuationOptions o;
  o.ds = 9.9e-4;
  o.n_steps = 8;
  return o;
}

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
};

FitResult fit(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return {slope, (sy - slope * sx) / m};
}

Outcome primary_asymptotics() {
  double worst_slope = 0.0, worst_cross = 0.0, worst_res = 0.0, worst_icpt = 0.0;
  bool complete = true;
  for (int n : {1, 2}) {
    for (Sign s : {Sign::plus, Sign::minus}) {
      for (double gam : {0.0, 1.0}) {
        const auto b = trace_primary(n, s, gam, kModel, kBranchGeom, branch_options());
        if (b.aborted || b.points.size() != 8) {
          complete = false;
          continue;
        }
        std::vector<double> sv, an, s2, lam;
        for (const auto& p : b.points) {
          const double res = evaluate_F(p.state, kModel, kBranchGeom).max_abs_coefficient();
          worst_res = std::max(worst_res, res);
          double cross = 0.0;
          for (int k = 1; k <= kBranchGeom.N; ++k)
            if (k != n) cross += p.state.w.a(k) * p.state.w.a(k);
          worst_cross = std::max(worst_cross, cross / (p.state.w.a(n) * p.state.w.a(n)));
          if (p.arclength <= 4e-3 && sv.size() < 4) {
            sv.push_back(p.arclength);
            an.push_back(p.state.w.a(n));
          }
          s2.push_back(p.arclength * p.arclength);
          lam.push_back(p.state.lambda);
        }
        if (sv.size() < 4) complete = false;
        worst_slope = std::max(worst_slope, std::abs(fit(sv, an).slope - 1.0));
        worst_icpt = std::max(worst_icpt, std::abs(fit(s2, lam).intercept - lambda_star(n, s, gam, kModel, kBranchGeom)));
      }
    }
  }
  const bool ok = complete && worst_slope <= 0.1 && worst_cross <= 1e-2 && worst_res <= 1e-10 && worst_icpt <= 1e-6;
  return {ok, "8 branches, max |a_n/s - 1| = " + num(worst_slope) + ", cross-mode energy ratio = " + num(worst_cross) +
                  ", max residual = " + num(worst_res) + ", lambda intercept error = " + num(worst_icpt)};
}

// 6 -----------------------------------------------------------------------
Outcome wilton_suite() {
  const auto geom = StripGeometry::make(1.0, 1.0, 16);
  const Sign sign = Sign::plus;
  const double gs = resonant_gamma(1, sign, kModel, geom);
  ContinuationOptions o;
  o.secondary_steps = 3;
  bool ok = true;
  std::string detail;
  for (double sgn : {-1.0, 1.0}) {
    std::vector<double> amps;
    double min_gain = INFINITY, min_parent = INFINITY;
    for (double scale : {1.0, 0.5, 0.25, 0.125}) {
      const double delta = sgn * 0.02 * std::abs(gs) * scale;
      const auto r = trace_secondary(1, sign, delta, kModel, geom, o);
      if (!r.found || !r.bifurcation_point) {
        ok = false;
        detail += " delta=" + num(delta) + " not found;";
        continue;
      }
      amps.push_back(r.bifurcation_point->amplitude);
      const Branch* host = r.host();
      min_parent = std::min(min_parent, host->points.at(static_cast<std::size_t>(r.secondary_plus.parent->point_index)).amplitude);
      min_parent = std::min(min_parent, r.bifurcation_point->amplitude);
      for (const Branch* half : {&r.secondary_plus, &r.secondary_minus}) {
        if (half->points.empty()) {
          ok = false;
          continue;
        }
        const auto& first = half->points.front();
        const double ratio = std::abs(first.state.w.a(2)) / std::abs(first.state.w.a(1));
        // Mode-1 primary point nearest in arclength.
        const BranchPoint* ref = nullptr;
        for (const auto& p : r.primary.points)
          if (!ref || std::abs(p.arclength - first.arclength) < std::abs(ref->arclength - first.arclength)) ref = &p;
        if (!ref) {
          ok = false;
          continue;
        }
        const double base = std::abs(ref->state.w.a(2)) / std::abs(ref->state.w.a(1));
        min_gain = std::min(min_gain, ratio / base);
      }
    }
    bool monotone = amps.size() == 4;
    for (std::size_t i = 1; i < amps.size(); ++i) monotone = monotone && amps[i] < amps[i - 1];
    ok = ok && monotone && min_gain >= 5.0 && min_parent >= 1e-6;
    detail += std::string(sgn < 0 ? " delta<0:" : " delta>0:") + " amplitudes";
    for (double a : amps) detail += " " + num(a);
    detail += ", min mode-ratio gain " + num(min_gain) + ", min parent amplitude " + num(min_parent) + ";";
  }
  return {ok, "n = 1, sign +, gamma* = " + num(gs) + ";" + detail};
}

// 7 -----------------------------------------------------------------------
Outcome flow_closed_form() {
  const auto geom = StripGeometry::make(1.0, 1.0, 16);
  double worst = 0.0;
  for (auto [lam, gam] : {std::pair{1.1, 0.0}, std::pair{-0.7, 2.0}, std::pair{0.4, -1.5}}) {
    const auto st = SurfaceState::trivial(16, lam, gam);
    const auto f = reconstruct(st, kModel, geom);
    for (std::size_t k = 0; k < f.psi.size(); ++k)
      worst = std::max(worst, std::abs(f.psi[k] - laminar_psi(f.V[k], lam, gam, geom.h)));
  }
  const double gam = -std::sqrt(gamma_star_squared(1, 2, kModel, geom));
  const double lam = lambda_star(1, Sign::minus, gam, kModel, geom);
  const auto st = SurfaceState::trivial(16, lam, gam);
  const auto f = reconstruct(st, kModel, geom);
  const auto cl = critical_layers(f, st);
  const double target = geom.h - lam / gam;
  const double cell = geom.h / (f.n_y - 1);
  std::vector<int> hits(static_cast<std::size_t>(f.n_x), 0);
  double worst_y = 0.0;
  for (const auto& p : cl.critical_points) {
    worst_y = std::max(worst_y, std::abs(p.Y - target));
    if (std::abs(p.Y - target) <= cell) ++hits[static_cast<std::size_t>(p.column)];
  }
  bool every_column = true;
  for (int h : hits) every_column = every_column && h >= 1;
  const bool ok = worst <= 1e-12 && every_column && worst_y <= cell;
  return {ok, "laminar max error " + num(worst) + "; critical line target Y = " + num(target) + ", max offset " +
                  num(worst_y) + " (cell " + num(cell) + "), " + std::to_string(cl.critical_points.size()) +
                  " points over " + std::to_string(f.n_x) + " columns"};
}

// 8 -----------------------------------------------------------------------
Outcome surface_checks() {
  double worst_psi = 0.0, worst_b = 0.0;
  int count = 0;
  for (int n : {1, 2}) {
    for (Sign s : {Sign::plus, Sign::minus}) {
      ContinuationOptions o;
      o.ds = 5e-3;
      o.n_steps = 20;
      const auto b = trace_primary(n, s, 1.0, kModel, kBranchGeom, o);
      for (std::size_t i : {std::size_t{0}, b.points.size() / 2, b.points.size() - 1}) {
        if (i >= b.points.size()) continue;
        const auto f = reconstruct(b.points[i].state, kModel, kBranchGeom, 33);
        worst_psi = std::max(worst_psi, f.diagnostics.surface_streamline);
        worst_b = std::max(worst_b, f.diagnostics.bernoulli);
        ++count;
      }
    }
  }
  return {count == 12 && worst_psi <= 1e-8 && worst_b <= 1e-6,
          std::to_string(count) + " converged points, max |psi| on surface = " + num(worst_psi) +
              ", max Bernoulli residual = " + num(worst_b)};
}

// 9 -----------------------------------------------------------------------
Outcome second_derivative_crosscheck() {
  const auto geom = StripGeometry::make(1.0, 1.0, 16);
  double worst_bil = 0.0, worst_sym = 0.0, worst_q = 0.0, reported = 0.0;
  for (int n : {1, 2, 3}) {
    const double gam = 0.7;
    const double lam = lambda_star(n, Sign::plus, gam, kModel, geom);
    const auto y1 = PeriodicField::cosine(16, n);
    const auto y2 = PeriodicField::cosine(16, 2 * n, 0.6) + PeriodicField::cosine(16, 1, 0.2);
    for (int k : {n, 2 * n, 3 * n}) {
      const double p12 = second_derivative_pairing(y1, y2, k, lam, gam, kModel, geom);
      const double p21 = second_derivative_pairing(y2, y1, k, lam, gam, kModel, geom);
      const double p3 = second_derivative_pairing(y1.scaled(3.0), y2, k, lam, gam, kModel, geom);
      const double pa = second_derivative_pairing(y1 + y2, y2, k, lam, gam, kModel, geom);
      const double p22 = second_derivative_pairing(y2, y2, k, lam, gam, kModel, geom);
      const double scale = std::max({1.0, std::abs(p12), std::abs(p22)});
      worst_sym = std::max(worst_sym, std::abs(p12 - p21) / scale);
      worst_bil = std::max({worst_bil, std::abs(p3 - 3.0 * p12) / scale, std::abs(pa - p12 - p22) / scale});
    }
    worst_q = std::max({worst_q, std::abs(triple_cosine_integral(n, n, n)), std::abs(sin_sin_cos_integral(n, n, n))});
    reported = std::max(reported, std::abs(triple_cosine_integral(n, 2 * n, 2 * n)));
  }
  return {worst_bil <= 1e-6 && worst_sym <= 1e-6 && worst_q <= 1e-12,
          "bilinearity " + num(worst_bil) + ", symmetry " + num(worst_sym) + ", cos^3 and sin^2 cos integrals " +
              num(worst_q) + "; reported |int cos(nx)cos^2(2nx)| = " + num(reported)};
}

// 10 ----------------------------------------------------------------------
Outcome determinism() {
  bool same = true;
  std::size_t bytes = 0;
  for (int n : {1, 2}) {
    for (Sign s : {Sign::plus, Sign::minus}) {
      for (double gam : {0.0, 1.0}) {
        const auto a = branch_csv(trace_primary(n, s, gam, kModel, kBranchGeom, branch_options()), kBranchGeom.N);
        const auto b = branch_csv(trace_primary(n, s, gam, kModel, kBranchGeom, branch_options()), kBranchGeom.N);
        same = same && a == b;
        bytes += a.size();
      }
    }
  }
  return {same, "8 branch CSVs (" + std::to_string(bytes) + " bytes) compared byte for byte"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double time_limit;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "dispersion roots", 1.0, dispersion_roots},
      {2, "resonance pairs", 1.0, resonance_suite},
      {3, "linearization oracle", 30.0, linearization_oracle},
      {4, "trivial branch identity", INFINITY, trivial_identity},
      {5, "primary-branch asymptotics", 120.0, primary_asymptotics},
      {6, "Wilton ripple detection", 300.0, wilton_suite},
      {7, "laminar flow and critical layer", INFINITY, flow_closed_form},
      {8, "surface streamline and Bernoulli", INFINITY, surface_checks},
      {9, "second-derivative cross-check", INFINITY, second_derivative_crosscheck},
      {10, "determinism", INFINITY, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = num(secs) + " s";
    if (std::isfinite(c.time_limit)) {
      timing += " (limit " + num(c.time_limit) + " s)";
      if (secs >= c.time_limit) {
        o.passed = false;
        timing += " over time";
      }
    }
    if (!o.passed) ++failures;
    std::printf("%s  criterion %2d  %-34s %s [%s]\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
