#pragma once

#include <Eigen/Dense>

#include "hydroelastic/elasticity.hpp"
#include "hydroelastic/spectral.hpp"

namespace hydroelastic {

/// Candidate wave: pressure-head offset theta, surface deviation w = v - h
/// (even, zero mean), wave-speed parameter lambda = m/h + gamma h/2 and the
/// constant vorticity gamma.
struct SurfaceState {
  double theta = 0.0;
  PeriodicField w = PeriodicField::zero(1);
  double lambda = 0.0;
  double gamma = 0.0;

  static SurfaceState trivial(int order, double lambda, double gamma);

  /// Throws DomainError unless w is even with |mean(w)| <= 1e-13.
  void validate() const;
  bool is_trivial() const;
};

/// Reduced nonlinear operator F(lambda, gamma, (theta, w)); even field.
PeriodicField evaluate_F(const SurfaceState& state, const EnergyModel& model,
                         const StripGeometry& geom);

/// F together with its exact partial derivative in lambda,
/// dF/dlambda = 2 lambda nu - 2 gamma A nu - 2 lambda nu^3.
struct ResidualWithLambdaDerivative {
  PeriodicField F;
  PeriodicField dF_dlambda;
};
ResidualWithLambdaDerivative evaluate_F_and_lambda_derivative(const SurfaceState& state,
                                                              const EnergyModel& model,
                                                              const StripGeometry& geom);

/// D_n = 2 n coth(nh) lambda^2 - 2 lambda gamma - (2g + n^4 E22(1,0)).
double dispersion(int n, double lambda, double gamma, const EnergyModel& model,
                  const StripGeometry& geom);

/// dD_n/dlambda = 4 lambda n coth(nh) - 2 gamma.
double dispersion_lambda_derivative(int n, double lambda, double gamma, const StripGeometry& geom);

/// Linearization at the trivial state applied to (zeta, f):
/// -zeta - sum_k D_k a_k cos(kx).
PeriodicField linearized_trivial(double lambda, double gamma, const EnergyModel& model,
                                 const StripGeometry& geom, const PeriodicField& f, double zeta);

/// Unknown vector ordering (theta, a_1..a_N) paired with residual modes 0..N.
Eigen::VectorXd pack_unknowns(const SurfaceState& state);
SurfaceState unpack_unknowns(const Eigen::VectorXd& u, double lambda, double gamma);
Eigen::VectorXd residual_vector(const PeriodicField& F);

enum class JacobianMode { analytic_trivial, finite_difference };

/// (N+1)x(N+1) Jacobian of the residual modes with respect to the unknowns.
/// analytic_trivial is only valid at the trivial state. finite_difference uses
/// central differences with step 1e-6 max(1, ||u||_inf).
Eigen::MatrixXd jacobian(const SurfaceState& state, const EnergyModel& model,
                         const StripGeometry& geom, JacobianMode mode);

struct PhysicalParameters {
  double mass_flux = 0.0;  ///< m
  double bernoulli = 0.0;  ///< Q
};

/// m = h (lambda - gamma h / 2), Q = theta + 2 g h + lambda^2.
PhysicalParameters to_physical(double lambda, double theta, double gamma, const StripGeometry& geom);
PhysicalParameters to_physical(const SurfaceState& state, const StripGeometry& geom);

struct ReducedParameters {
  double lambda = 0.0;
  double theta = 0.0;
};
ReducedParameters from_physical(double mass_flux, double bernoulli, double gamma,
                                const StripGeometry& geom);

}  // namespace hydroelastic
