#pragma once

// Fluid domain reconstruction on the conformal rectangle [0, 2pi) x [-h, 0].
// The map (x, y) -> (U, V) sends it onto one period of the fluid, the bed
// y = -h to V = 0 and the top row to the membrane.

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hydroelastic/elasticity.hpp"
#include "hydroelastic/residual.hpp"
#include "hydroelastic/spectral.hpp"

namespace hydroelastic {

/// Samples of a harmonic function and its gradient on a rectangular grid,
/// row-major with y outer.
struct ExtensionSamples {
  int n_x = 0;
  int n_y = 0;
  std::vector<double> value;
  std::vector<double> d_dx;
  std::vector<double> d_dy;
};

/// Evaluates the harmonic function on the strip equal to `boundary` at y = 0
/// and 0 at y = -h: mode k carries sinh(k(y+h))/sinh(kh), the mean carries
/// (y+h)/h.
class HarmonicExtension {
 public:
  HarmonicExtension(PeriodicField boundary, double h);

  double value(double x, double y) const;
  /// (f, f_x, f_y) at one point.
  std::array<double, 3> gradient(double x, double y) const;
  /// Harmonic conjugate g with g_x = f_y, g_y = -f_x, normalized so that the
  /// non-secular part has zero mean on y = 0; returns (g, g_x, g_y). The mean
  /// mode contributes [f] x / h.
  std::array<double, 3> conjugate(double x, double y) const;

  const PeriodicField& boundary() const noexcept { return boundary_; }
  double depth() const noexcept { return h_; }

 private:
  PeriodicField boundary_;
  double h_;
};

/// Grid nodes: x_i = 2 pi i / n_x, y_j = -h + h j / (n_y - 1).
ExtensionSamples harmonic_extension(const PeriodicField& boundary, double h, int n_x, int n_y);

/// Pointwise reconstruction from a surface state.
struct FlowSample {
  double U = 0, V = 0, U_x = 0, U_y = 0, V_x = 0, V_y = 0;
  double psi = 0, psi_x = 0, psi_y = 0;
  double det = 0;
  double psi_X = 0, psi_Y = 0;
};

class FlowSampler {
 public:
  FlowSampler(const SurfaceState& state, const StripGeometry& geom);
  /// Throws DegenerateProfileError when U_x^2 + V_x^2 < 1e-10.
  FlowSample sample(double x, double y) const;

  double mass_flux() const noexcept { return m_; }
  double depth() const noexcept { return h_; }

 private:
  double h_;
  double gamma_;
  double m_;
  HarmonicExtension V_;
  HarmonicExtension eta_;
};

struct FlowDiagnostics {
  double surface_streamline = 0.0;      ///< max |psi(x, 0)|
  double bed_streamline = 0.0;          ///< max |psi(x, -h) + m|
  double bernoulli = 0.0;               ///< max |Psi_X^2 + Psi_Y^2 + 2gV + P - Q| on y = 0
  double cauchy_riemann = 0.0;          ///< max over interior of |U_x - V_y|, |U_y + V_x|
  double boundary_V = 0.0;              ///< max |V - v| on y = 0 and |V| on y = -h
  double state_residual = 0.0;          ///< max |F_k| of the state
  double min_jacobian = 0.0;
};

struct FlowField {
  int n_x = 0;
  int n_y = 0;
  double h = 0.0;
  double g = 0.0;
  double lambda = 0.0;
  double gamma = 0.0;
  double mass_flux = 0.0;
  double bernoulli = 0.0;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> U, V, psi, psi_X, psi_Y, jacobian_det;
  FlowDiagnostics diagnostics;
  std::vector<std::string> warnings;
  std::shared_ptr<const FlowSampler> sampler;

  std::size_t index(int j, int i) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(n_x) + static_cast<std::size_t>(i);
  }
};

/// n_x = 0 selects the collocation size. A state whose residual exceeds
/// 1e-9 (1 + lambda^2) is reconstructed with a warning.
FlowField reconstruct(const SurfaceState& state, const EnergyModel& model, const StripGeometry& geom,
                      int n_y = 129, int n_x = 0);

struct CriticalPoint {
  int column = 0;
  double x = 0.0;  ///< conformal coordinates
  double y = 0.0;
  double X = 0.0;  ///< physical coordinates
  double Y = 0.0;
};

struct CriticalLayers {
  std::vector<CriticalPoint> critical_points;
  std::vector<CriticalPoint> stagnation_points;
  std::optional<double> laminar_critical_depth;
};

/// Critical points: sign changes of psi_Y along each column, refined by
/// bisection. Stagnation points: cells where psi_X and psi_Y both change sign
/// beyond roundoff, refined by 10 quadrant subdivisions.
CriticalLayers critical_layers(const FlowField& field, const SurfaceState& state);

/// Laminar stream function gamma Y^2/2 + (m/h - gamma h/2) Y - m.
double laminar_psi(double Y, double lambda, double gamma, double h);

}  // namespace hydroelastic
