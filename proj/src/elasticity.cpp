#include "hydroelastic/elasticity.hpp"

#include <algorithm>
#include <cmath>

#include "hydroelastic/errors.hpp"

namespace hydroelastic {

namespace {

constexpr double kRestTol = 1e-10;
constexpr double kFdRelTol = 1e-6;

ModelCheck make_check(std::string name, double value, double tol, bool passed) {
  return ModelCheck{std::move(name), value, tol, passed};
}

}  // namespace

bool ModelReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const ModelCheck& c) { return c.passed; });
}

ModelReport check_rest_state(const EnergyModel::Functions& fns) {
  ModelReport r;
  auto vanish = [&](const char* name, const EnergyModel::Fn& f) {
    const double v = f(1.0, 0.0);
    r.checks.push_back(make_check(name, v, kRestTol, std::isfinite(v) && std::abs(v) <= kRestTol));
  };
  vanish("E(1,0)=0", fns.E);
  vanish("E1(1,0)=0", fns.E1);
  vanish("E2(1,0)=0", fns.E2);
  vanish("E12(1,0)=0", fns.E12);
  const double e11 = fns.E11(1.0, 0.0);
  const double e22 = fns.E22(1.0, 0.0);
  r.checks.push_back(make_check("E11(1,0)>0", e11, 0.0, std::isfinite(e11) && e11 > 0.0));
  r.checks.push_back(make_check("E22(1,0)>0", e22, 0.0, std::isfinite(e22) && e22 > 0.0));
  return r;
}

ModelReport check_partials_consistency(const EnergyModel::Functions& fns) {
  ModelReport r;
  constexpr double step = 1e-4;
  double worst[6] = {0, 0, 0, 0, 0, 0};
  for (double nu : {0.8, 0.9, 1.0, 1.1, 1.2}) {
    for (double mu : {-0.2, -0.1, 0.0, 0.1, 0.2}) {
      auto rel = [](double fd, double exact) {
        return std::abs(fd - exact) / std::max(1.0, std::abs(exact));
      };
      const double d_nu = (fns.E(nu + step, mu) - fns.E(nu - step, mu)) / (2 * step);
      const double d_mu = (fns.E(nu, mu + step) - fns.E(nu, mu - step)) / (2 * step);
      const double d11 = (fns.E1(nu + step, mu) - fns.E1(nu - step, mu)) / (2 * step);
      const double d12 = (fns.E1(nu, mu + step) - fns.E1(nu, mu - step)) / (2 * step);
      const double d22 = (fns.E2(nu, mu + step) - fns.E2(nu, mu - step)) / (2 * step);
      const double d21 = (fns.E2(nu + step, mu) - fns.E2(nu - step, mu)) / (2 * step);
      worst[0] = std::max(worst[0], rel(d_nu, fns.E1(nu, mu)));
      worst[1] = std::max(worst[1], rel(d_mu, fns.E2(nu, mu)));
      worst[2] = std::max(worst[2], rel(d11, fns.E11(nu, mu)));
      worst[3] = std::max(worst[3], rel(d12, fns.E12(nu, mu)));
      worst[4] = std::max(worst[4], rel(d22, fns.E22(nu, mu)));
      worst[5] = std::max(worst[5], rel(d21, fns.E12(nu, mu)));
    }
  }
  const char* names[6] = {"E1 vs dE/dnu", "E2 vs dE/dmu", "E11 vs dE1/dnu", "E12 vs dE1/dmu",
                          "E22 vs dE2/dmu", "E12 vs dE2/dnu"};
  for (int i = 0; i < 6; ++i)
    r.checks.push_back(make_check(names[i], worst[i], kFdRelTol,
                                  std::isfinite(worst[i]) && worst[i] <= kFdRelTol));
  return r;
}

EnergyModel::EnergyModel(std::string label, Functions fns,
                         std::vector<std::pair<std::string, double>> parameters)
    : label_(std::move(label)), fns_(std::move(fns)), parameters_(std::move(parameters)) {
  if (!fns_.E || !fns_.E1 || !fns_.E2 || !fns_.E11 || !fns_.E12 || !fns_.E22)
    throw ModelError("energy model '" + label_ + "' is missing a partial derivative");
  const auto report = check_rest_state(fns_);
  for (const auto& c : report.checks) {
    if (!c.passed)
      throw ModelError("energy model '" + label_ + "' fails " + c.name + " (value " +
                       std::to_string(c.value) + ")");
  }
  rest_e11_ = fns_.E11(1.0, 0.0);
  rest_e22_ = fns_.E22(1.0, 0.0);
}

EnergyModel quadratic_model(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw DomainError("quadratic model needs alpha > 0 and beta > 0");
  EnergyModel::Functions f;
  f.E = [=](double nu, double mu) { return 0.5 * alpha * (nu - 1) * (nu - 1) + 0.5 * beta * mu * mu; };
  f.E1 = [=](double nu, double) { return alpha * (nu - 1); };
  f.E2 = [=](double, double mu) { return beta * mu; };
  f.E11 = [=](double, double) { return alpha; };
  f.E12 = [](double, double) { return 0.0; };
  f.E22 = [=](double, double) { return beta; };
  return EnergyModel("quadratic", std::move(f), {{"alpha", alpha}, {"beta", beta}});
}

ProfileGeometry stretch_bend(const PeriodicField& w, const StripGeometry& geom) {
  if (w.parity() != Parity::even) throw DomainError("surface elevation w must be even");
  if (std::abs(mean(w)) > 1e-13 * std::max(1.0, w.coefficient_norm()))
    throw DomainError("surface elevation w must have zero mean");
  if (w.order() != geom.N) throw DomainError("surface elevation truncation differs from geometry");

  const double h = geom.h;
  const int M = geom.M;
  const auto w1 = differentiate(w, 1);
  const auto w2 = differentiate(w, 2);
  const auto cw1 = hilbert_strip(w1, h);
  const auto cw2 = hilbert_strip(w2, h);

  const auto g_w1 = to_grid(w1, M);
  const auto g_cw1 = to_grid(cw1, M);

  auto numerator = w2 + multiply(cw1, w2, M) - multiply(w1, cw2, M);
  const auto g_num = to_grid(numerator, M);

  std::vector<double> nu_s(static_cast<std::size_t>(M)), mu_s(static_cast<std::size_t>(M));
  for (std::size_t j = 0; j < nu_s.size(); ++j) {
    const double s = 1.0 + g_cw1[j];
    const double nu2 = s * s + g_w1[j] * g_w1[j];
    nu_s[j] = std::sqrt(nu2);
    if (!(nu_s[j] >= kMinStretch))
      throw DegenerateProfileError("stretch nu = " + std::to_string(nu_s[j]) +
                                   " at grid index " + std::to_string(j));
    mu_s[j] = g_num[j] / nu2;
  }

  auto nu = from_grid(nu_s, geom.N, Parity::even);
  auto mu = from_grid(mu_s, geom.N, Parity::even);
  auto nu_p = differentiate(nu, 1);
  auto mu_p = differentiate(mu, 1);
  return ProfileGeometry{std::move(nu),  std::move(mu),  std::move(nu_p), std::move(mu_p),
                         std::move(numerator), std::move(nu_s), std::move(mu_s)};
}

EnergyComposites compose_energy(const ProfileGeometry& pg, const EnergyModel& model,
                                const StripGeometry& geom) {
  const auto M = pg.nu_samples.size();
  std::vector<double> e1(M), e2(M);
  for (std::size_t j = 0; j < M; ++j) {
    e1[j] = model.E1(pg.nu_samples[j], pg.mu_samples[j]);
    e2[j] = model.E2(pg.nu_samples[j], pg.mu_samples[j]);
    if (!std::isfinite(e1[j]) || !std::isfinite(e2[j]))
      throw EvaluationError("energy partial is undefined on the profile", j);
  }
  return {from_grid(e1, geom.N, Parity::even), from_grid(e2, geom.N, Parity::even)};
}

PeriodicField pressure(const PeriodicField& w, const EnergyModel& model, const StripGeometry& geom) {
  const auto pg = stretch_bend(w, geom);
  const auto ec = compose_energy(pg, model, geom);
  const int M = geom.M;
  const auto e2p = differentiate(ec.E2, 1);
  const auto inner =
      compose_pointwise_on(Parity::odd, M, [](double d, double nu) { return d / nu; }, e2p, pg.nu);
  const auto bending = compose_pointwise_on(Parity::even, M, [](double d, double nu) { return d / nu; },
                                            differentiate(inner, 1), pg.nu);
  const auto stretching = compose_pointwise_on(
      Parity::even, M, [](double mu, double nu, double e1) { return mu / nu * e1; }, pg.mu, pg.nu,
      ec.E1);
  return bending - stretching;
}

PeriodicField tangential_balance_residual(const PeriodicField& w, const EnergyModel& model,
                                          const StripGeometry& geom) {
  const auto pg = stretch_bend(w, geom);
  const auto ec = compose_energy(pg, model, geom);
  return multiply(pg.nu, differentiate(ec.E1, 1), geom.M) +
         multiply(pg.mu, differentiate(ec.E2, 1), geom.M);
}

}  // namespace hydroelastic
