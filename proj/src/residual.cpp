#include "hydroelastic/residual.hpp"

#include <algorithm>
#include <cmath>

#include "hydroelastic/errors.hpp"

namespace hydroelastic {

SurfaceState SurfaceState::trivial(int order, double lambda, double gamma) {
  return SurfaceState{0.0, PeriodicField::zero(order), lambda, gamma};
}

void SurfaceState::validate() const {
  if (w.parity() != Parity::even) throw DomainError("surface state w must be even");
  if (std::abs(mean(w)) > 1e-13) throw DomainError("surface state w must have zero mean");
  if (!std::isfinite(theta) || !std::isfinite(lambda) || !std::isfinite(gamma))
    throw DomainError("surface state parameters must be finite");
}

bool SurfaceState::is_trivial() const { return theta == 0.0 && w.max_abs_coefficient() == 0.0; }

namespace {

struct Terms {
  PeriodicField F;
  PeriodicField nu;
  PeriodicField A;
  PeriodicField nu3;
};

Terms compute_terms(const SurfaceState& s, const EnergyModel& model, const StripGeometry& geom) {
  s.validate();
  const int M = geom.M;
  const double h = geom.h;
  const auto& w = s.w;
  const double lam = s.lambda;
  const double gam = s.gamma;

  const auto pg = stretch_bend(w, geom);
  const auto ec = compose_energy(pg, model, geom);
  const auto& nu = pg.nu;

  // A = [w^2]/(2h) - w + C_h(w w') - w C_h(w')
  const auto w1 = differentiate(w, 1);
  const auto ww = multiply(w, w, M);
  const auto c_ww1 = hilbert_strip(multiply(w, w1, M), h);
  const auto w_cw1 = multiply(w, hilbert_strip(w1, h), M);
  const auto A = (c_ww1 - w_cw1 - w).plus_constant(mean(ww) / (2.0 * h));

  const auto nu3 = multiply(multiply(nu, nu, M), nu, M);
  const auto A_nu = multiply(A, nu, M);
  const auto AA_nu = multiply(A, A_nu, M);
  const auto head = w.scaled(-2.0 * geom.g).plus_constant(s.theta + lam * lam);

  const auto e2p = differentiate(ec.E2, 1);
  const auto e2pp = differentiate(ec.E2, 2);

  auto F = nu.scaled(lam * lam) + AA_nu.scaled(gam * gam) - A_nu.scaled(2.0 * lam * gam) -
           multiply(head, nu3, M) + multiply(e2pp, nu, M) - multiply(e2p, pg.nu_prime, M) -
           multiply(pg.bend_numerator, ec.E1, M);
  return Terms{std::move(F), nu, A, nu3};
}

}  // namespace

PeriodicField evaluate_F(const SurfaceState& state, const EnergyModel& model,
                         const StripGeometry& geom) {
  return compute_terms(state, model, geom).F;
}

ResidualWithLambdaDerivative evaluate_F_and_lambda_derivative(const SurfaceState& state,
                                                              const EnergyModel& model,
                                                              const StripGeometry& geom) {
  auto t = compute_terms(state, model, geom);
  const double lam = state.lambda;
  auto dF = t.nu.scaled(2.0 * lam) - multiply(t.A, t.nu, geom.M).scaled(2.0 * state.gamma) -
            t.nu3.scaled(2.0 * lam);
  return {std::move(t.F), std::move(dF)};
}

double dispersion(int n, double lambda, double gamma, const EnergyModel& model,
                  const StripGeometry& geom) {
  if (n < 1) throw DomainError("dispersion mode must be >= 1");
  if (!(geom.h > 0.0)) throw DomainError("depth must be positive");
  // Extended precision keeps the cancellation near a root below the rounding of lambda itself.
  const long double nn = n, lam = lambda;
  const long double c = 1.0L / std::tanh(nn * static_cast<long double>(geom.h));
  const long double d = 2.0L * nn * c * lam * lam - 2.0L * lam * static_cast<long double>(gamma) -
                        (2.0L * static_cast<long double>(geom.g) + nn * nn * nn * nn * static_cast<long double>(model.rest_E22()));
  return static_cast<double>(d);
}

double dispersion_lambda_derivative(int n, double lambda, double gamma, const StripGeometry& geom) {
  const double nn = static_cast<double>(n);
  return 4.0 * lambda * nn * coth(nn * geom.h) - 2.0 * gamma;
}

PeriodicField linearized_trivial(double lambda, double gamma, const EnergyModel& model,
                                 const StripGeometry& geom, const PeriodicField& f, double zeta) {
  if (f.parity() != Parity::even) throw DomainError("linearization direction must be even");
  const auto n = static_cast<std::size_t>(f.order()) + 1;
  std::vector<double> a(n, 0.0);
  a[0] = -zeta;
  for (std::size_t k = 1; k < n; ++k)
    a[k] = -dispersion(static_cast<int>(k), lambda, gamma, model, geom) * f.a(static_cast<int>(k));
  return PeriodicField(std::move(a), std::vector<double>(n, 0.0), Parity::even);
}

Eigen::VectorXd pack_unknowns(const SurfaceState& state) {
  const int N = state.w.order();
  Eigen::VectorXd u(N + 1);
  u[0] = state.theta;
  for (int k = 1; k <= N; ++k) u[k] = state.w.a(k);
  return u;
}

SurfaceState unpack_unknowns(const Eigen::VectorXd& u, double lambda, double gamma) {
  const auto n = static_cast<std::size_t>(u.size());
  std::vector<double> a(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) a[k] = u[static_cast<Eigen::Index>(k)];
  return SurfaceState{u[0], PeriodicField(std::move(a), std::vector<double>(n, 0.0), Parity::even),
                      lambda, gamma};
}

Eigen::VectorXd residual_vector(const PeriodicField& F) {
  Eigen::VectorXd r(F.order() + 1);
  for (int k = 0; k <= F.order(); ++k) r[k] = F.a(k);
  return r;
}

Eigen::MatrixXd jacobian(const SurfaceState& state, const EnergyModel& model,
                         const StripGeometry& geom, JacobianMode mode) {
  const int N = state.w.order();
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(N + 1, N + 1);
  if (mode == JacobianMode::analytic_trivial) {
    if (!state.is_trivial())
      throw DomainError("analytic Jacobian is only available at the trivial state");
    J(0, 0) = -1.0;
    for (int k = 1; k <= N; ++k) J(k, k) = -dispersion(k, state.lambda, state.gamma, model, geom);
    return J;
  }

  const Eigen::VectorXd u = pack_unknowns(state);
  const double step = 1e-6 * std::max(1.0, u.lpNorm<Eigen::Infinity>());
  for (int j = 0; j <= N; ++j) {
    Eigen::VectorXd up = u, um = u;
    up[j] += step;
    um[j] -= step;
    const double actual = up[j] - um[j];
    if (!(actual > 0.0)) throw PrecisionError("finite-difference step underflow");
    const auto fp = residual_vector(evaluate_F(unpack_unknowns(up, state.lambda, state.gamma), model, geom));
    const auto fm = residual_vector(evaluate_F(unpack_unknowns(um, state.lambda, state.gamma), model, geom));
    J.col(j) = (fp - fm) / actual;
  }
  return J;
}

PhysicalParameters to_physical(double lambda, double theta, double gamma, const StripGeometry& geom) {
  const double h = geom.h;
  return {h * (lambda - 0.5 * gamma * h), theta + 2.0 * geom.g * h + lambda * lambda};
}

PhysicalParameters to_physical(const SurfaceState& state, const StripGeometry& geom) {
  return to_physical(state.lambda, state.theta, state.gamma, geom);
}

ReducedParameters from_physical(double mass_flux, double bernoulli, double gamma,
                                const StripGeometry& geom) {
  const double h = geom.h;
  const double lambda = mass_flux / h + 0.5 * gamma * h;
  return {lambda, bernoulli - 2.0 * geom.g * h - lambda * lambda};
}

}  // namespace hydroelastic
