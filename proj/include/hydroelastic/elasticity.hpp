#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "hydroelastic/spectral.hpp"

namespace hydroelastic {

/// Stored-energy density E(nu, mu) of the membrane together with its first and
/// second partial derivatives. Construction runs the rest-state validator and
/// refuses models that are not a locally convex minimum at (nu, mu) = (1, 0).
class EnergyModel {
 public:
  using Fn = std::function<double(double nu, double mu)>;

  struct Functions {
    Fn E, E1, E2, E11, E12, E22;
  };

  EnergyModel(std::string label, Functions fns,
              std::vector<std::pair<std::string, double>> parameters = {});

  double E(double nu, double mu) const { return fns_.E(nu, mu); }
  double E1(double nu, double mu) const { return fns_.E1(nu, mu); }
  double E2(double nu, double mu) const { return fns_.E2(nu, mu); }
  double E11(double nu, double mu) const { return fns_.E11(nu, mu); }
  double E12(double nu, double mu) const { return fns_.E12(nu, mu); }
  double E22(double nu, double mu) const { return fns_.E22(nu, mu); }

  /// E11(1,0) and E22(1,0).
  double rest_E11() const { return rest_e11_; }
  double rest_E22() const { return rest_e22_; }

  const std::string& label() const noexcept { return label_; }
  const std::vector<std::pair<std::string, double>>& parameters() const noexcept {
    return parameters_;
  }
  const Functions& functions() const noexcept { return fns_; }

 private:
  std::string label_;
  Functions fns_;
  std::vector<std::pair<std::string, double>> parameters_;
  double rest_e11_ = 0.0;
  double rest_e22_ = 0.0;
};

struct ModelCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ModelReport {
  std::vector<ModelCheck> checks;
  bool passed() const;
};

/// Rest state and local convexity: E, E1, E2, E12 vanish at (1,0) to 1e-10,
/// E11(1,0) > 0 and E22(1,0) > 0.
ModelReport check_rest_state(const EnergyModel::Functions& fns);

/// Supplied partials against central differences of E (and of the supplied
/// first partials) on a sample grid around (1,0), 1e-6 relative.
ModelReport check_partials_consistency(const EnergyModel::Functions& fns);

/// E = (alpha/2)(nu-1)^2 + (beta/2) mu^2.
EnergyModel quadratic_model(double alpha, double beta);

/// Stretch and bend rate of the profile v = w + h, with the collocation samples
/// they were composed from.
struct ProfileGeometry {
  PeriodicField nu;
  PeriodicField mu;
  PeriodicField nu_prime;
  PeriodicField mu_prime;
  /// w'' + C_h(w') w'' - w' C_h(w''), i.e. mu * nu^2.
  PeriodicField bend_numerator;
  std::vector<double> nu_samples;
  std::vector<double> mu_samples;
};

inline constexpr double kMinStretch = 1e-8;

/// Requires w even with zero mean. Throws DegenerateProfileError when the
/// stretch drops below kMinStretch on the grid.
ProfileGeometry stretch_bend(const PeriodicField& w, const StripGeometry& geom);

/// E1 and E2 composed on the stretch/bend samples.
struct EnergyComposites {
  PeriodicField E1;
  PeriodicField E2;
};
EnergyComposites compose_energy(const ProfileGeometry& pg, const EnergyModel& model,
                                const StripGeometry& geom);

/// Deformation pressure ((E2)'/nu)'/nu - (mu/nu) E1.
PeriodicField pressure(const PeriodicField& w, const EnergyModel& model, const StripGeometry& geom);

/// nu (E1)' + mu (E2)'; diagnostic only.
PeriodicField tangential_balance_residual(const PeriodicField& w, const EnergyModel& model,
                                          const StripGeometry& geom);

}  // namespace hydroelastic
