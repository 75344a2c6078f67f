#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the transform code of the library.

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

/// Direct evaluation of sum a_k cos(kx) + b_k sin(kx).
inline double series(const std::vector<double>& a, const std::vector<double>& b, double x) {
  double s = a.empty() ? 0.0 : a[0];
  for (std::size_t k = 1; k < a.size(); ++k) s += a[k] * std::cos(static_cast<double>(k) * x);
  for (std::size_t k = 1; k < b.size(); ++k) s += b[k] * std::sin(static_cast<double>(k) * x);
  return s;
}

struct Coeffs {
  std::vector<double> a, b;
};

/// Product of two trigonometric polynomials by the product-to-sum formulas,
/// truncated to `order`.
inline Coeffs product(const Coeffs& f, const Coeffs& g, int order) {
  const int nf = static_cast<int>(f.a.size()) - 1;
  const int ng = static_cast<int>(g.a.size()) - 1;
  std::vector<double> a(static_cast<std::size_t>(nf + ng + 1), 0.0), b(a.size(), 0.0);
  auto fa = [&](int k) { return f.a[static_cast<std::size_t>(k)]; };
  auto fb = [&](int k) { return k == 0 ? 0.0 : f.b[static_cast<std::size_t>(k)]; };
  auto ga = [&](int k) { return g.a[static_cast<std::size_t>(k)]; };
  auto gb = [&](int k) { return k == 0 ? 0.0 : g.b[static_cast<std::size_t>(k)]; };
  // Each term is stored as c cos(mx) or c sin(mx) with m possibly negative.
  auto add_cos = [&](int m, double c) { a[static_cast<std::size_t>(std::abs(m))] += c; };
  auto add_sin = [&](int m, double c) {
    if (m > 0) b[static_cast<std::size_t>(m)] += c;
    if (m < 0) b[static_cast<std::size_t>(-m)] -= c;
  };
  for (int j = 0; j <= nf; ++j) {
    for (int k = 0; k <= ng; ++k) {
      // cos j cos k = (cos(j-k) + cos(j+k)) / 2
      add_cos(j - k, 0.5 * fa(j) * ga(k));
      add_cos(j + k, 0.5 * fa(j) * ga(k));
      // sin j sin k = (cos(j-k) - cos(j+k)) / 2
      add_cos(j - k, 0.5 * fb(j) * gb(k));
      add_cos(j + k, -0.5 * fb(j) * gb(k));
      // sin j cos k = (sin(j+k) + sin(j-k)) / 2
      add_sin(j + k, 0.5 * fb(j) * ga(k));
      add_sin(j - k, 0.5 * fb(j) * ga(k));
      // cos j sin k = (sin(j+k) - sin(j-k)) / 2
      add_sin(j + k, 0.5 * fa(j) * gb(k));
      add_sin(j - k, -0.5 * fa(j) * gb(k));
    }
  }
  a.resize(static_cast<std::size_t>(order) + 1, 0.0);
  b.resize(static_cast<std::size_t>(order) + 1, 0.0);
  b[0] = 0.0;
  return {a, b};
}

/// Composite Simpson rule on [lo, hi] with an even number of panels.
template <class Fn>
double simpson(Fn&& f, double lo, double hi, int panels) {
  const double dx = (hi - lo) / panels;
  double s = f(lo) + f(hi);
  for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * dx);
  return s * dx / 3.0;
}

/// Fourier cosine coefficient of f by high-resolution Simpson quadrature.
template <class Fn>
double cosine_coefficient(Fn&& f, int k, int panels = 4096) {
  const double pi = std::numbers::pi;
  const double c = oracle::simpson([&](double x) { return f(x) * std::cos(k * x); }, -pi, pi, panels);
  return k == 0 ? c / (2 * pi) : c / pi;
}

}  // namespace oracle
