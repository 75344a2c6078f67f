#pragma once

// Truncated Fourier representation of real 2*pi-periodic functions and the
// Fourier-multiplier operators acting on them.
//
// Fields are held as cosine coefficients a_0..a_N and sine coefficients
// b_1..b_N. Nonlinear work is done on a uniform collocation grid
// x_j = 2*pi*j/M with M >= 3N; products and compositions are transformed back
// and truncated to N.

#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace hydroelastic {

enum class Parity { even, odd, none };

std::string_view to_string(Parity p);

/// Parity of a product under the usual algebra (even*odd = odd, ...).
Parity product_parity(Parity a, Parity b);

/// Smallest even grid size > 3N (and >= 4).
int collocation_size(int order);

/// coth(x) for x > 0, evaluated without overflow for large arguments.
double coth(double x);

class PeriodicField {
 public:
  /// `cos_coeffs` holds a_0..a_N, `sin_coeffs` holds b_0..b_N with b_0 ignored
  /// (it must be zero). Opposite-parity content below 1e-13 of the field norm
  /// is cleared as roundoff; anything larger raises ParityError.
  PeriodicField(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                Parity parity);

  static PeriodicField zero(int order, Parity parity = Parity::even);
  static PeriodicField constant(int order, double value);
  static PeriodicField cosine(int order, int mode, double amplitude = 1.0);
  static PeriodicField sine(int order, int mode, double amplitude = 1.0);

  int order() const noexcept { return static_cast<int>(cos_.size()) - 1; }
  Parity parity() const noexcept { return parity_; }

  double a(int k) const { return cos_.at(static_cast<std::size_t>(k)); }
  double b(int k) const { return sin_.at(static_cast<std::size_t>(k)); }
  std::span<const double> cos_coeffs() const noexcept { return cos_; }
  std::span<const double> sin_coeffs() const noexcept { return sin_; }

  /// ||a||_2 + ||b||_2.
  double coefficient_norm() const;
  double max_abs_coefficient() const;

  /// Zero-pads or truncates to a new order.
  PeriodicField with_order(int order) const;

  PeriodicField operator-() const;
  PeriodicField scaled(double c) const;
  PeriodicField plus_constant(double c) const;

  friend PeriodicField operator+(const PeriodicField& f, const PeriodicField& g);
  friend PeriodicField operator-(const PeriodicField& f, const PeriodicField& g);
  friend PeriodicField operator*(double c, const PeriodicField& f) { return f.scaled(c); }

 private:
  std::vector<double> cos_;
  std::vector<double> sin_;
  Parity parity_;
};

/// Collocation values of `f` on the M-point grid. Even (odd) fields produce
/// exactly (anti)symmetric samples.
std::vector<double> to_grid(const PeriodicField& f, int grid_size);
inline std::vector<double> to_grid(const PeriodicField& f) {
  return to_grid(f, collocation_size(f.order()));
}

/// Coefficients up to `order` of grid samples. The declared parity is checked
/// on the grid: the opposite (anti)symmetric part must stay below 1e-12 of the
/// sample magnitude, otherwise ParityError.
PeriodicField from_grid(std::span<const double> values, int order, Parity parity);

double grid_point(int j, int grid_size);

/// Periodic Hilbert transform for the strip of depth h:
/// cos(kx) -> coth(kh) sin(kx), sin(kx) -> -coth(kh) cos(kx). Annihilates the mean.
PeriodicField hilbert_strip(const PeriodicField& f, double h);

/// Dirichlet-Neumann operator of the strip: [f]/h + hilbert_strip(f', h).
PeriodicField dirichlet_neumann(const PeriodicField& f, double h);

/// Exact spectral derivative, order in {1,2,3,4}.
PeriodicField differentiate(const PeriodicField& f, int order);

/// Dealiased pointwise product on the collocation grid, truncated to N.
/// grid_size = 0 uses collocation_size(N).
PeriodicField multiply(const PeriodicField& f, const PeriodicField& g, int grid_size = 0);

double mean(const PeriodicField& f);
double evaluate(const PeriodicField& f, double x);

namespace detail {
PeriodicField compose_impl(const std::function<double(const double*)>& fn,
                           std::initializer_list<const PeriodicField*> fields,
                           std::optional<Parity> parity, int grid_size);
}

/// Evaluates fn(u, v, ...) on the collocation values of the fields and
/// transforms back. Output parity defaults to even when every input is even and
/// `none` otherwise. Non-finite results raise EvaluationError with the grid index.
template <class Fn, class... Fields>
PeriodicField compose_pointwise(Fn&& fn, const Fields&... fields) {
  static_assert(sizeof...(Fields) > 0);
  return detail::compose_impl(
      [&](const double* v) {
        return [&]<std::size_t... I>(std::index_sequence<I...>) {
          return static_cast<double>(fn(v[I]...));
        }(std::index_sequence_for<Fields...>{});
      },
      {&fields...}, std::nullopt, 0);
}

/// As compose_pointwise with an explicit output parity (nullopt = default rule)
/// and grid size (0 = collocation_size(N)).
template <class Fn, class... Fields>
PeriodicField compose_pointwise_on(std::optional<Parity> parity, int grid_size, Fn&& fn,
                                   const Fields&... fields) {
  static_assert(sizeof...(Fields) > 0);
  return detail::compose_impl(
      [&](const double* v) {
        return [&]<std::size_t... I>(std::index_sequence<I...>) {
          return static_cast<double>(fn(v[I]...));
        }(std::index_sequence_for<Fields...>{});
      },
      {&fields...}, parity, grid_size);
}

/// Discrete L2 pairing (1/2pi) * integral of f*g over a period.
double l2_pairing(const PeriodicField& f, const PeriodicField& g);

struct StripGeometry {
  double h = 1.0;  ///< conformal mean depth
  double g = 1.0;  ///< gravitational acceleration
  int N = 32;      ///< spectral truncation
  int M = 96;      ///< collocation grid size

  /// Validates h > 0, g > 0, N >= 1, M even and M >= 3N. M = 0 picks the default.
  static StripGeometry make(double h, double g, int N, int M = 0);
};

}  // namespace hydroelastic
