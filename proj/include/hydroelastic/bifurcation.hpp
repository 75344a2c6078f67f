#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hydroelastic/elasticity.hpp"
#include "hydroelastic/spectral.hpp"

namespace hydroelastic {

enum class Sign { plus, minus };

std::string_view to_string(Sign s);
Sign parse_sign(std::string_view text);
inline double sign_value(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

/// T_n = tanh(n h) / n.
double T(int n, double h);

/// Root of D_n(., gamma): (gamma/2) T_n +- sqrt(gamma^2 T_n^2/4 + (g + n^4 E22/2) T_n).
double lambda_star(int n, Sign sign, double gamma, const EnergyModel& model, const StripGeometry& geom);

/// Squared vorticity at which lambda*_{n,s} = lambda*_{m,s} for one sign s.
double gamma_star_squared(int n, int m, const EnergyModel& model, const StripGeometry& geom);

struct BifurcationPoint {
  int n = 1;
  Sign sign = Sign::plus;
  double lambda_star = 0.0;
  double gamma = 0.0;
  int kernel_dim = 1;
  std::optional<int> partner_mode;
};

/// At gamma = +-sqrt(gamma*^2_{n,m}), the sign whose roots coincide.
Sign resonant_sign(int n, int m, double gamma, const EnergyModel& model, const StripGeometry& geom);

struct KernelClass {
  enum class Kind { invertible, simple, double_root };
  Kind kind = Kind::invertible;
  int n = 0;
  int m = 0;  ///< partner mode when kind == double_root
  Sign sign = Sign::plus;
};

std::string describe(const KernelClass& k);

/// Scans modes 1..n_max for |D_k(lambda, gamma)| <= 1e-9 (1 + scale_k), with
/// scale_k the magnitude of the largest term of D_k. Three or more matches
/// raise InconsistencyError.
KernelClass classify_kernel(double lambda, double gamma, const EnergyModel& model,
                            const StripGeometry& geom, int n_max);

/// 2 lambda*/T_n - gamma, the factor multiplying w* in the mixed derivative
/// F_{lambda,(theta,w)}[1, (0, cos nx)] = -2(2 lambda*/T_n - gamma) cos(nx).
double transversality(int n, Sign sign, double gamma, const EnergyModel& model,
                      const StripGeometry& geom);

/// <F_{(theta,w)(theta,w)}(lambda, gamma, (0,0))[(0,y1),(0,y2)] | cos(kx)>, the
/// pairing being the integral over (-pi, pi). Central second differences with a
/// step of 1e-4 / max|y|, Richardson-extrapolated once.
double second_derivative_pairing(const PeriodicField& y1, const PeriodicField& y2, int k,
                                 double lambda, double gamma, const EnergyModel& model,
                                 const StripGeometry& geom);

/// Integral over one period of cos(a x) cos(b x) cos(c x), by trapezoidal
/// quadrature (exact for these trigonometric polynomials).
double triple_cosine_integral(int a, int b, int c);
double sin_sin_cos_integral(int a, int b, int c);

/// Reference expressions for the second derivative at a resonant point,
/// written in closed form (second-derivative terms collected by hand).
/// Projected on cos(kx) by quadrature. The finite-difference pairing is
/// authoritative; these are reported alongside it.
double closed_form_pairing_nn(int n, int k, double lambda, double gamma, const EnergyModel& model,
                              const StripGeometry& geom);
double closed_form_pairing_n2n(int n, int k, double lambda, double gamma, const EnergyModel& model,
                               const StripGeometry& geom);

/// Coefficient M of cos(nx)cos(2nx) in the closed-form second derivative.
double nondegeneracy_coefficient(int n, double lambda, double gamma, const EnergyModel& model,
                                 const StripGeometry& geom);

struct NondegeneracyReport {
  int n = 1;
  Sign sign = Sign::plus;
  double gamma_star = 0.0;
  double lambda_star = 0.0;
  double det_b8a = 0.0;
  double det_b8b = 0.0;
  double M = 0.0;
  /// cos(nx) cos^2(2nx) over a period, exact value and quadrature.
  double triple_integral_exact = 0.0;
  double triple_integral_quadrature = 0.0;
  /// (2/pi) <F2[x1,x2] | cos(nx)> from finite differences, the effective
  /// cos(nx)cos(2nx) coefficient seen by the projection.
  double M_finite_difference = 0.0;
  double M_relative_discrepancy = 0.0;
  /// Finite-difference pairings used in the determinants.
  double pairing_x1x1_on_n = 0.0;
  double pairing_x1x2_on_2n = 0.0;
  double pairing_x1x2_on_n = 0.0;
  /// Closed-form counterparts, filled when requested.
  std::optional<double> closed_form_x1x1_on_n;
  std::optional<double> closed_form_x1x2_on_n;
  std::optional<double> closed_form_x1x2_on_2n;
  std::vector<std::string> warnings;
};

/// Determinant tests at the resonance gamma^2 = gamma*^2_{n,2n}, where gamma
/// takes the sign for which lambda*_{n,sign} = lambda*_{2n,sign}.
NondegeneracyReport nondegeneracy_determinants(int n, Sign sign, const EnergyModel& model,
                                               const StripGeometry& geom,
                                               bool include_closed_form = false);

}  // namespace hydroelastic
