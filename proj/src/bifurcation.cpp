#include "hydroelastic/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "hydroelastic/errors.hpp"
#include "hydroelastic/residual.hpp"

namespace hydroelastic {

namespace {

constexpr double kPi = std::numbers::pi;

double quadrature(const std::function<double(double)>& f, int max_frequency) {
  const int P = 16 * (max_frequency + 1);
  double s = 0.0;
  for (int j = 0; j < P; ++j) s += f(-kPi + 2.0 * kPi * j / P);
  return 2.0 * kPi * s / P;
}

double project_on_cos(const PeriodicField& f, int k) {
  return k == 0 ? 2.0 * kPi * f.a(0) : kPi * f.a(k);
}

}  // namespace

std::string_view to_string(Sign s) { return s == Sign::plus ? "+" : "-"; }

Sign parse_sign(std::string_view text) {
  if (text == "+" || text == "plus" || text == "+1") return Sign::plus;
  if (text == "-" || text == "minus" || text == "-1") return Sign::minus;
  throw DomainError("sign must be '+' or '-', got '" + std::string(text) + "'");
}

double T(int n, double h) {
  if (n < 1) throw DomainError("mode index must be >= 1");
  const double nn = static_cast<double>(n);
  return std::tanh(nn * h) / nn;
}

double lambda_star(int n, Sign sign, double gamma, const EnergyModel& model, const StripGeometry& geom) {
  if (n < 1) throw DomainError("mode index must be >= 1");
  const long double nn = n, gam = gamma;
  const long double t = std::tanh(nn * static_cast<long double>(geom.h)) / nn;
  const long double root = std::sqrt(gam * gam * t * t / 4.0L +
                                     (static_cast<long double>(geom.g) + nn * nn * nn * nn * model.rest_E22() / 2.0L) * t);
  const double guess = static_cast<double>(gam / 2.0L * t + sign_value(sign) * root);
  // Return the double with the smallest dispersion residual among the neighbours of the rounded root.
  double best = guess;
  double best_abs = std::abs(dispersion(n, guess, gamma, model, geom));
  for (double dir : {-INFINITY, INFINITY}) {
    double x = guess;
    for (int step = 0; step < 4; ++step) {
      x = std::nextafter(x, dir);
      const double v = std::abs(dispersion(n, x, gamma, model, geom));
      if (v < best_abs) {
        best = x;
        best_abs = v;
      }
    }
  }
  return best;
}

double gamma_star_squared(int n, int m, const EnergyModel& model, const StripGeometry& geom) {
  if (n < 1 || m < 1) throw DomainError("mode indices must be >= 1");
  if (n == m) throw DomainError("resonance needs two distinct modes");
  const double e22 = model.rest_E22();
  const double tn = T(n, geom.h);
  const double tm = T(m, geom.h);
  const double n4 = std::pow(static_cast<double>(n), 4);
  const double m4 = std::pow(static_cast<double>(m), 4);
  const double num = (2.0 * geom.g + n4 * e22) * tn - (2.0 * geom.g + m4 * e22) * tm;
  return num * num / (2.0 * tn * tm * (tn - tm) * (m4 - n4) * e22);
}

Sign resonant_sign(int n, int m, double gamma, const EnergyModel& model, const StripGeometry& geom) {
  const double dp = std::abs(lambda_star(n, Sign::plus, gamma, model, geom) -
                             lambda_star(m, Sign::plus, gamma, model, geom));
  const double dm = std::abs(lambda_star(n, Sign::minus, gamma, model, geom) -
                             lambda_star(m, Sign::minus, gamma, model, geom));
  return dp <= dm ? Sign::plus : Sign::minus;
}

std::string describe(const KernelClass& k) {
  switch (k.kind) {
    case KernelClass::Kind::invertible:
      return "invertible";
    case KernelClass::Kind::simple:
      return "simple(" + std::to_string(k.n) + "," + std::string(to_string(k.sign)) + ")";
    case KernelClass::Kind::double_root:
      return "double(" + std::to_string(k.n) + "," + std::to_string(k.m) + "," +
             std::string(to_string(k.sign)) + ")";
  }
  return "invertible";
}

KernelClass classify_kernel(double lambda, double gamma, const EnergyModel& model,
                            const StripGeometry& geom, int n_max) {
  if (n_max < 1) throw DomainError("n_max must be >= 1");
  std::vector<int> hits;
  for (int k = 1; k <= n_max; ++k) {
    const double kk = static_cast<double>(k);
    const double scale = std::max({2.0 * kk * coth(kk * geom.h) * lambda * lambda,
                                   std::abs(2.0 * lambda * gamma),
                                   2.0 * geom.g + std::pow(kk, 4) * model.rest_E22()});
    if (std::abs(dispersion(k, lambda, gamma, model, geom)) <= 1e-9 * (1.0 + scale))
      hits.push_back(k);
  }
  auto sign_of_root = [&](int k) {
    const double dp = std::abs(lambda - lambda_star(k, Sign::plus, gamma, model, geom));
    const double dm = std::abs(lambda - lambda_star(k, Sign::minus, gamma, model, geom));
    return dp <= dm ? Sign::plus : Sign::minus;
  };
  KernelClass out;
  if (hits.empty()) return out;
  if (hits.size() == 1) {
    out.kind = KernelClass::Kind::simple;
    out.n = hits[0];
    out.sign = sign_of_root(hits[0]);
    return out;
  }
  if (hits.size() == 2) {
    out.kind = KernelClass::Kind::double_root;
    out.n = hits[0];
    out.m = hits[1];
    out.sign = sign_of_root(hits[0]);
    return out;
  }
  throw InconsistencyError("dispersion relation vanishes for " + std::to_string(hits.size()) +
                           " modes at once; at most two are possible");
}

double transversality(int n, Sign sign, double gamma, const EnergyModel& model,
                      const StripGeometry& geom) {
  return 2.0 * lambda_star(n, sign, gamma, model, geom) / T(n, geom.h) - gamma;
}

double second_derivative_pairing(const PeriodicField& y1, const PeriodicField& y2, int k,
                                 double lambda, double gamma, const EnergyModel& model,
                                 const StripGeometry& geom) {
  if (y1.parity() != Parity::even || y2.parity() != Parity::even)
    throw DomainError("pairing directions must be even fields");
  if (std::abs(mean(y1)) > 0.0 || std::abs(mean(y2)) > 0.0)
    throw DomainError("pairing directions must have zero mean");
  if (k < 0 || k > geom.N) throw DomainError("projection mode outside truncation");

  const double ymax = std::max(y1.max_abs_coefficient(), y2.max_abs_coefficient());
  if (!(ymax > 0.0)) return 0.0;
  const auto sum = y1 + y2;
  const auto diff = y1 - y2;

  double magnitude = 0.0;
  auto full = [&](const PeriodicField& dir, double t) {
    SurfaceState s{0.0, dir.scaled(t), lambda, gamma};
    auto F = evaluate_F(s, model, geom);
    magnitude = std::max(magnitude, F.max_abs_coefficient());
    return F;
  };
  // Largest cosine moment of the even (quadratic) part of F along +-dir.
  double quadratic_scale = 0.0;
  auto second_difference = [&](double t) {
    const auto sp = full(sum, t), sm = full(sum, -t), dp = full(diff, t), dm = full(diff, -t);
    for (int j = 0; j <= geom.N; ++j) {
      quadratic_scale = std::max(quadratic_scale, std::abs(project_on_cos(sp + sm, j)) / (2.0 * t * t));
      quadratic_scale = std::max(quadratic_scale, std::abs(project_on_cos(dp + dm, j)) / (2.0 * t * t));
    }
    return (project_on_cos(sp, k) - project_on_cos(dp, k) - project_on_cos(dm, k) + project_on_cos(sm, k)) /
           (4.0 * t * t);
  };

  // Two Richardson levels remove the t^2 and t^4 terms, so a fairly large t keeps roundoff down.
  const double t = 2e-3 / ymax;
  const double s1 = second_difference(t);
  const double s2 = second_difference(0.5 * t);
  const double s4 = second_difference(0.25 * t);
  const double fine = (4.0 * s4 - s2) / 3.0;
  const double extrapolated = (16.0 * fine - (4.0 * s2 - s1) / 3.0) / 15.0;
  const double noise = 1e-16 * magnitude / (0.0625 * t * t);
  if (std::abs(extrapolated - fine) > 1e-3 * std::max(std::abs(extrapolated), quadratic_scale) + 1e4 * noise)
    throw PrecisionError("second-difference pairing did not settle under extrapolation");
  return extrapolated;
}

double triple_cosine_integral(int a, int b, int c) {
  return quadrature([&](double x) { return std::cos(a * x) * std::cos(b * x) * std::cos(c * x); },
                    std::abs(a) + std::abs(b) + std::abs(c));
}

double sin_sin_cos_integral(int a, int b, int c) {
  return quadrature([&](double x) { return std::sin(a * x) * std::sin(b * x) * std::cos(c * x); },
                    std::abs(a) + std::abs(b) + std::abs(c));
}

double closed_form_pairing_nn(int n, int k, double lambda, double gamma, const EnergyModel& model,
                              const StripGeometry& geom) {
  const double nn = n, h = geom.h, g = geom.g;
  const double c1 = coth(nn * h), c2 = coth(2 * nn * h);
  const double l2 = lambda * lambda;
  const double e11 = model.rest_E11(), e22 = model.rest_E22();
  auto f = [&](double x) {
    const double cs = std::cos(nn * x), sn = std::sin(nn * x);
    const double cc = cs * cs;
    const double v = l2 * (nn * c1 * cc - 2 * nn * nn * c1 * c1 * cc - 2 * nn * nn * sn * sn) +
                     2 * gamma * gamma * cc -
                     2 * lambda * gamma * (nn * c2 * std::cos(2 * nn * x) - 4 * nn * c1 * cc) +
                     12 * g * nn * c1 * cc - 6 * l2 * nn * nn * c1 * c1 * cc +
                     e22 * std::pow(nn, 5) * c1 + 2 * e11 * nn * nn * nn * c1 * cc;
    return v * std::cos(k * x);
  };
  return quadrature(f, 2 * n + k);
}

double closed_form_pairing_n2n(int n, int k, double lambda, double gamma, const EnergyModel& model,
                               const StripGeometry& geom) {
  const double nn = n, h = geom.h, g = geom.g;
  const double c1 = coth(nn * h), c2 = coth(2 * nn * h), c3 = coth(3 * nn * h);
  const double l2 = lambda * lambda;
  const double e11 = model.rest_E11(), e22 = model.rest_E22();
  auto f = [&](double x) {
    const double cn = std::cos(nn * x), c2n = std::cos(2 * nn * x);
    const double sn = std::sin(nn * x), s2n = std::sin(2 * nn * x);
    const double v =
        l2 * ((nn * c1 - 4 * nn * nn * c1 * c2) * cn * c2n - 4 * nn * nn * sn * s2n) -
        2 * lambda * gamma * (nn * c3 * std::cos(3 * nn * x) - nn * c1 * cn - 4 * nn * c1 * cn * c2n) +
        12 * g * nn * c1 * cn * c2n - 6 * l2 * nn * nn * c1 * c2 * cn * c2n +
        16 * e22 * std::pow(nn, 5) * (c1 * cn * c2n + c2 * sn * s2n) + 2 * gamma * gamma * c2n * c2n +
        8 * e11 * nn * nn * nn * c1 * cn * c2n;
    return v * std::cos(k * x);
  };
  return quadrature(f, 3 * n + k);
}

double nondegeneracy_coefficient(int n, double lambda, double gamma, const EnergyModel& model,
                                 const StripGeometry& geom) {
  const double nn = n, h = geom.h, g = geom.g;
  const double c1 = coth(nn * h), c2 = coth(2 * nn * h);
  const double l2 = lambda * lambda;
  return l2 * (nn * c1 - 4 * nn * nn * c1 * c2) + 8 * nn * lambda * gamma * c1 + 12 * g * nn * c1 -
         6 * l2 * nn * nn * c1 * c2 + 16 * model.rest_E22() * std::pow(nn, 5) * c1 +
         8 * model.rest_E11() * nn * nn * nn * c1;
}

NondegeneracyReport nondegeneracy_determinants(int n, Sign sign, const EnergyModel& model,
                                               const StripGeometry& geom, bool include_closed_form) {
  if (2 * n > geom.N) throw DomainError("truncation must resolve mode 2n");
  NondegeneracyReport r;
  r.n = n;
  r.sign = sign;
  const double g2 = gamma_star_squared(n, 2 * n, model, geom);
  const double gpos = std::sqrt(g2);
  r.gamma_star = resonant_sign(n, 2 * n, gpos, model, geom) == sign ? gpos : -gpos;
  r.lambda_star = lambda_star(n, sign, r.gamma_star, model, geom);

  const double lam = r.lambda_star, gam = r.gamma_star;
  const double tn = T(n, geom.h), t2n = T(2 * n, geom.h);
  r.det_b8a = 8.0 * kPi * kPi * lam * lam * (1.0 / t2n - 1.0 / tn);
  r.M = nondegeneracy_coefficient(n, lam, gam, model, geom);
  // cos(nx) cos^2(2nx) = cos(nx)/2 + (cos(3nx) + cos(5nx))/4 integrates to zero.
  r.triple_integral_exact = 0.0;
  r.triple_integral_quadrature = triple_cosine_integral(n, 2 * n, 2 * n);
  const double first_column = -4.0 * lam / tn + 2.0 * gam;
  r.det_b8b = r.M * first_column * r.triple_integral_exact;

  const auto x1 = PeriodicField::cosine(geom.N, n);
  const auto x2 = PeriodicField::cosine(geom.N, 2 * n);
  r.pairing_x1x1_on_n = second_derivative_pairing(x1, x1, n, lam, gam, model, geom);
  r.pairing_x1x2_on_2n = second_derivative_pairing(x1, x2, 2 * n, lam, gam, model, geom);
  r.pairing_x1x2_on_n = second_derivative_pairing(x1, x2, n, lam, gam, model, geom);
  r.M_finite_difference = 2.0 / kPi * r.pairing_x1x2_on_n;
  r.M_relative_discrepancy =
      std::abs(r.M_finite_difference - r.M) / std::max(std::abs(r.M), 1e-300);

  if (include_closed_form) {
    r.closed_form_x1x1_on_n = closed_form_pairing_nn(n, n, lam, gam, model, geom);
    r.closed_form_x1x2_on_n = closed_form_pairing_n2n(n, n, lam, gam, model, geom);
    r.closed_form_x1x2_on_2n = closed_form_pairing_n2n(n, 2 * n, lam, gam, model, geom);
  }

  const double scale = std::max(1.0, std::abs(r.M * first_column) * 2.0 * kPi);
  if (std::abs(r.det_b8a) < 1e-10 * std::max(1.0, 8.0 * kPi * kPi * lam * lam / t2n))
    r.warnings.push_back("det_B8a is numerically zero");
  if (std::abs(r.det_b8b) < 1e-10 * scale)
    r.warnings.push_back(
        "det_B8b vanishes: the integral of cos(nx)cos^2(2nx) over a period is zero "
        "(quadrature " + std::to_string(r.triple_integral_quadrature) + ")");
  if (r.M_relative_discrepancy > 1e-4)
    r.warnings.push_back("closed-form M differs from the finite-difference projection by " +
                         std::to_string(r.M_relative_discrepancy) + " (relative)");
  return r;
}

}  // namespace hydroelastic
