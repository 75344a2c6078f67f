#include "hydroelastic/flowfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hydroelastic/errors.hpp"

namespace hydroelastic {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// sinh(k(y+h))/sinh(kh) and cosh(k(y+h))/sinh(kh) for y in [-h, 0], written
/// with decaying exponentials only.
struct ModeFactors {
  double S;
  double C;
};

ModeFactors mode_factors(double k, double y, double h) {
  const double decay = std::exp(k * y);
  const double denom = -std::expm1(-2.0 * k * h);
  const double far = std::exp(-2.0 * k * (y + h));
  return {decay * (-std::expm1(-2.0 * k * (y + h))) / denom, decay * (1.0 + far) / denom};
}

double node_x(int i, int n_x) { return kTwoPi * i / n_x; }
double node_y(int j, int n_y, double h) { return -h + h * j / (n_y - 1); }

}  // namespace

HarmonicExtension::HarmonicExtension(PeriodicField boundary, double h)
    : boundary_(std::move(boundary)), h_(h) {
  if (!(h > 0.0)) throw DomainError("strip depth must be positive");
}

double HarmonicExtension::value(double x, double y) const { return gradient(x, y)[0]; }

std::array<double, 3> HarmonicExtension::gradient(double x, double y) const {
  const double a0 = boundary_.a(0);
  double f = a0 * (y + h_) / h_, fx = 0.0, fy = a0 / h_;
  for (int k = 1; k <= boundary_.order(); ++k) {
    const double a = boundary_.a(k), b = boundary_.b(k);
    if (a == 0.0 && b == 0.0) continue;
    const double kk = k;
    const auto mf = mode_factors(kk, y, h_);
    const double c = std::cos(kk * x), s = std::sin(kk * x);
    f += (a * c + b * s) * mf.S;
    fx += kk * (-a * s + b * c) * mf.S;
    fy += kk * (a * c + b * s) * mf.C;
  }
  return {f, fx, fy};
}

std::array<double, 3> HarmonicExtension::conjugate(double x, double y) const {
  const double a0 = boundary_.a(0);
  double g = a0 * x / h_, gx = a0 / h_, gy = 0.0;
  for (int k = 1; k <= boundary_.order(); ++k) {
    const double a = boundary_.a(k), b = boundary_.b(k);
    if (a == 0.0 && b == 0.0) continue;
    const double kk = k;
    const auto mf = mode_factors(kk, y, h_);
    const double c = std::cos(kk * x), s = std::sin(kk * x);
    g += (a * s - b * c) * mf.C;
    gx += kk * (a * c + b * s) * mf.C;
    gy += kk * (a * s - b * c) * mf.S;
  }
  return {g, gx, gy};
}

ExtensionSamples harmonic_extension(const PeriodicField& boundary, double h, int n_x, int n_y) {
  if (n_x < 1 || n_y < 2) throw DomainError("extension grid needs n_x >= 1 and n_y >= 2");
  const HarmonicExtension ext(boundary, h);
  ExtensionSamples out;
  out.n_x = n_x;
  out.n_y = n_y;
  const auto n = static_cast<std::size_t>(n_x) * static_cast<std::size_t>(n_y);
  out.value.resize(n);
  out.d_dx.resize(n);
  out.d_dy.resize(n);
  for (int j = 0; j < n_y; ++j) {
    for (int i = 0; i < n_x; ++i) {
      const auto idx = static_cast<std::size_t>(j) * static_cast<std::size_t>(n_x) + static_cast<std::size_t>(i);
      auto [f, fx, fy] = ext.gradient(node_x(i, n_x), node_y(j, n_y, h));
      if (j == n_y - 1) f = evaluate(boundary, node_x(i, n_x));
      if (j == 0) f = 0.0;
      out.value[idx] = f;
      out.d_dx[idx] = fx;
      out.d_dy[idx] = fy;
    }
  }
  return out;
}

namespace {

PeriodicField eta_boundary(const SurfaceState& state, const StripGeometry& geom, double m) {
  // v^2 has order 2N; keep all of it.
  const auto v = state.w.plus_constant(geom.h).with_order(2 * geom.N);
  const auto v2 = multiply(v, v, collocation_size(2 * geom.N));
  return v2.scaled(-0.5 * state.gamma).plus_constant(m);
}

}  // namespace

FlowSampler::FlowSampler(const SurfaceState& state, const StripGeometry& geom)
    : h_(geom.h),
      gamma_(state.gamma),
      m_(to_physical(state, geom).mass_flux),
      V_(state.w.plus_constant(geom.h), geom.h),
      eta_(eta_boundary(state, geom, m_), geom.h) {
  state.validate();
}

FlowSample FlowSampler::sample(double x, double y) const {
  FlowSample s;
  const auto v = V_.gradient(x, y);
  const auto u = V_.conjugate(x, y);
  const auto e = eta_.gradient(x, y);
  s.V = v[0];
  s.V_x = v[1];
  s.V_y = v[2];
  s.U = u[0];
  s.U_x = u[1];
  s.U_y = u[2];
  s.psi = e[0] + 0.5 * gamma_ * s.V * s.V - m_;
  s.psi_x = e[1] + gamma_ * s.V * s.V_x;
  s.psi_y = e[2] + gamma_ * s.V * s.V_y;
  s.det = s.U_x * s.U_x + s.V_x * s.V_x;
  if (!(s.det >= 1e-10))
    throw DegenerateProfileError("conformal map Jacobian " + std::to_string(s.det) + " at (" +
                                 std::to_string(x) + ", " + std::to_string(y) + ")");
  s.psi_X = (s.U_x * s.psi_x - s.V_x * s.psi_y) / s.det;
  s.psi_Y = (s.V_x * s.psi_x + s.U_x * s.psi_y) / s.det;
  return s;
}

FlowField reconstruct(const SurfaceState& state, const EnergyModel& model, const StripGeometry& geom,
                      int n_y, int n_x) {
  state.validate();
  if (state.w.order() != geom.N) throw DomainError("state truncation differs from geometry");
  if (n_x <= 0) n_x = geom.M;
  if (n_y < 2) throw DomainError("n_y must be at least 2");

  FlowField f;
  f.n_x = n_x;
  f.n_y = n_y;
  f.h = geom.h;
  f.g = geom.g;
  f.lambda = state.lambda;
  f.gamma = state.gamma;
  const auto phys = to_physical(state, geom);
  f.mass_flux = phys.mass_flux;
  f.bernoulli = phys.bernoulli;
  f.diagnostics.state_residual = evaluate_F(state, model, geom).max_abs_coefficient();
  if (f.diagnostics.state_residual > 1e-9 * (1.0 + state.lambda * state.lambda))
    f.warnings.push_back("state residual " + std::to_string(f.diagnostics.state_residual) +
                         " is large; the reconstruction does not describe a solution");

  auto sampler = std::make_shared<FlowSampler>(state, geom);
  f.sampler = sampler;
  for (int i = 0; i < n_x; ++i) f.x.push_back(node_x(i, n_x));
  for (int j = 0; j < n_y; ++j) f.y.push_back(node_y(j, n_y, geom.h));

  const auto total = static_cast<std::size_t>(n_x) * static_cast<std::size_t>(n_y);
  for (auto* v : {&f.U, &f.V, &f.psi, &f.psi_X, &f.psi_Y, &f.jacobian_det}) v->resize(total);

  const auto P = pressure(state.w, model, geom);
  const auto v_top = state.w.plus_constant(geom.h);
  auto& d = f.diagnostics;
  d.min_jacobian = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n_y; ++j) {
    for (int i = 0; i < n_x; ++i) {
      const auto s = sampler->sample(f.x[static_cast<std::size_t>(i)], f.y[static_cast<std::size_t>(j)]);
      const auto idx = f.index(j, i);
      f.U[idx] = s.U;
      f.V[idx] = s.V;
      f.psi[idx] = s.psi;
      f.psi_X[idx] = s.psi_X;
      f.psi_Y[idx] = s.psi_Y;
      f.jacobian_det[idx] = s.det;
      d.min_jacobian = std::min(d.min_jacobian, s.det);
      if (j > 0 && j < n_y - 1)
        d.cauchy_riemann =
            std::max({d.cauchy_riemann, std::abs(s.U_x - s.V_y), std::abs(s.U_y + s.V_x)});
      if (j == 0) {
        d.boundary_V = std::max(d.boundary_V, std::abs(s.V));
        d.bed_streamline = std::max(d.bed_streamline, std::abs(s.psi + f.mass_flux));
      }
      if (j == n_y - 1) {
        const double xi = f.x[static_cast<std::size_t>(i)];
        d.boundary_V = std::max(d.boundary_V, std::abs(s.V - evaluate(v_top, xi)));
        d.surface_streamline = std::max(d.surface_streamline, std::abs(s.psi));
        const double b = s.psi_X * s.psi_X + s.psi_Y * s.psi_Y + 2.0 * geom.g * s.V + evaluate(P, xi) -
                         f.bernoulli;
        d.bernoulli = std::max(d.bernoulli, std::abs(b));
      }
    }
  }
  return f;
}

double laminar_psi(double Y, double lambda, double gamma, double h) {
  const double m = h * (lambda - 0.5 * gamma * h);
  return 0.5 * gamma * Y * Y + (m / h - 0.5 * gamma * h) * Y - m;
}

namespace {

bool touches_zero(std::initializer_list<double> vals, double eps) {
  const auto [lo, hi] = std::minmax(vals);
  return lo <= eps && hi >= -eps;
}

}  // namespace

CriticalLayers critical_layers(const FlowField& field, const SurfaceState& state) {
  if (!field.sampler) throw DomainError("flow field has no sampler attached");
  const auto& smp = *field.sampler;
  CriticalLayers out;

  const int nx = field.n_x, ny = field.n_y;
  auto point_at = [&](int column, double x, double y) {
    const auto s = smp.sample(x, y);
    return CriticalPoint{column, x, y, s.U, s.V};
  };

  for (int i = 0; i < nx; ++i) {
    const double x = field.x[static_cast<std::size_t>(i)];
    for (int j = 0; j < ny; ++j) {
      const double a = field.psi_Y[field.index(j, i)];
      if (a == 0.0) {
        out.critical_points.push_back(point_at(i, x, field.y[static_cast<std::size_t>(j)]));
        continue;
      }
      if (j + 1 == ny) continue;
      const double b = field.psi_Y[field.index(j + 1, i)];
      if (!(a * b < 0.0)) continue;
      double lo = field.y[static_cast<std::size_t>(j)], hi = field.y[static_cast<std::size_t>(j + 1)];
      double f_lo = a;
      for (int it = 0; it < 60 && hi - lo > 1e-14 * field.h; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = smp.sample(x, mid).psi_Y;
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (f_lo < 0.0)) {
          lo = mid;
          f_lo = fm;
        } else {
          hi = mid;
        }
      }
      out.critical_points.push_back(point_at(i, x, 0.5 * (lo + hi)));
    }
  }

  double scale_X = 0.0, scale_Y = 0.0;
  for (std::size_t k = 0; k < field.psi_X.size(); ++k) {
    scale_X = std::max(scale_X, std::abs(field.psi_X[k]));
    scale_Y = std::max(scale_Y, std::abs(field.psi_Y[k]));
  }
  const double eps_X = 1e-12 * std::max(1.0, scale_X);
  const double eps_Y = 1e-12 * std::max(1.0, scale_Y);
  const double dx = kTwoPi / nx;
  const double dy = field.h / (ny - 1);
  const double diameter = std::hypot(dx, dy);

  auto cell_passes = [&](double x0, double y0, double wx, double wy) {
    const auto c00 = smp.sample(x0, y0), c10 = smp.sample(x0 + wx, y0);
    const auto c01 = smp.sample(x0, y0 + wy), c11 = smp.sample(x0 + wx, y0 + wy);
    return touches_zero({c00.psi_X, c10.psi_X, c01.psi_X, c11.psi_X}, eps_X) &&
           touches_zero({c00.psi_Y, c10.psi_Y, c01.psi_Y, c11.psi_Y}, eps_Y);
  };

  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int ip = (i + 1) % nx;
      const std::size_t k00 = field.index(j, i), k10 = field.index(j, ip);
      const std::size_t k01 = field.index(j + 1, i), k11 = field.index(j + 1, ip);
      if (!touches_zero({field.psi_X[k00], field.psi_X[k10], field.psi_X[k01], field.psi_X[k11]}, eps_X) ||
          !touches_zero({field.psi_Y[k00], field.psi_Y[k10], field.psi_Y[k01], field.psi_Y[k11]}, eps_Y))
        continue;
      double x0 = field.x[static_cast<std::size_t>(i)], y0 = field.y[static_cast<std::size_t>(j)];
      double wx = dx, wy = dy;
      for (int level = 0; level < 10; ++level) {
        wx *= 0.5;
        wy *= 0.5;
        bool moved = false;
        for (int q = 0; q < 4 && !moved; ++q) {
          const double qx = x0 + (q % 2) * wx, qy = y0 + (q / 2) * wy;
          if (cell_passes(qx, qy, wx, wy)) {
            x0 = qx;
            y0 = qy;
            moved = true;
          }
        }
        if (!moved) {
          wx *= 2.0;
          wy *= 2.0;
          break;
        }
      }
      const double cx = x0 + 0.5 * wx, cy = y0 + 0.5 * wy;
      const bool duplicate = std::any_of(
          out.stagnation_points.begin(), out.stagnation_points.end(), [&](const CriticalPoint& p) {
            double ddx = std::abs(p.x - cx);
            ddx = std::min(ddx, kTwoPi - ddx);
            return std::hypot(ddx, p.y - cy) < diameter;
          });
      if (!duplicate) out.stagnation_points.push_back(point_at(i, cx, cy));
    }
  }

  if (state.gamma != 0.0) {
    const double ratio = state.lambda / state.gamma;
    if (ratio >= 0.0 && ratio <= field.h) out.laminar_critical_depth = field.h - ratio;
  }
  return out;
}

}  // namespace hydroelastic
