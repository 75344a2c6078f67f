#include "hydroelastic/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "hydroelastic/errors.hpp"

namespace hydroelastic {

namespace {

constexpr double kParityTol = 1e-13;
constexpr double kGridParityTol = 1e-12;

// FFTW planning is not thread-safe; execution on new arrays is. Plans are
// created once per (kind, size) and reused for the lifetime of the process.
class PlanCache {
 public:
  fftw_plan get(fftw_r2r_kind kind, int n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(static_cast<int>(kind), n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<double> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
    fftw_plan p = fftw_plan_r2r_1d(n, in.data(), out.data(), kind,
                                   FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

// Type-I cosine transform on n = M/2 + 1 points.
void dct1(std::vector<double>& in, std::vector<double>& out) {
  fftw_execute_r2r(plan_cache().get(FFTW_REDFT00, static_cast<int>(in.size())), in.data(),
                   out.data());
}

// Type-I sine transform on n = M/2 - 1 points.
void dst1(std::vector<double>& in, std::vector<double>& out) {
  if (in.empty()) return;
  fftw_execute_r2r(plan_cache().get(FFTW_RODFT00, static_cast<int>(in.size())), in.data(),
                   out.data());
}

double l2(std::span<const double> v, std::size_t first = 0) {
  double s = 0.0;
  for (std::size_t i = first; i < v.size(); ++i) s += v[i] * v[i];
  return std::sqrt(s);
}

double max_abs(std::span<const double> v, std::size_t first = 0) {
  double m = 0.0;
  for (std::size_t i = first; i < v.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

Parity sum_parity(Parity a, Parity b) { return a == b ? a : Parity::none; }

void check_grid_size(int order, int grid_size) {
  if (grid_size < 4 || grid_size % 2 != 0 || grid_size / 2 <= order)
    throw DomainError("grid size " + std::to_string(grid_size) +
                      " cannot resolve truncation order " + std::to_string(order));
}

}  // namespace

std::string_view to_string(Parity p) {
  switch (p) {
    case Parity::even:
      return "even";
    case Parity::odd:
      return "odd";
    case Parity::none:
      return "none";
  }
  return "none";
}

Parity product_parity(Parity a, Parity b) {
  if (a == Parity::none || b == Parity::none) return Parity::none;
  return a == b ? Parity::even : Parity::odd;
}

int collocation_size(int order) {
  // Strictly above 3N so that quadratic products leave mode N alias-free.
  int m = 3 * order + 1;
  if (m % 2 != 0) ++m;
  return std::max(m, 4);
}

double coth(double x) {
  if (!(x > 0.0)) throw DomainError("coth argument must be positive");
  if (x > 36.0) return 1.0;
  return 1.0 + 2.0 / std::expm1(2.0 * x);
}

// ---------------------------------------------------------------------------
// PeriodicField

PeriodicField::PeriodicField(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs,
                             Parity parity)
    : cos_(std::move(cos_coeffs)), sin_(std::move(sin_coeffs)), parity_(parity) {
  if (cos_.empty()) throw DomainError("periodic field needs at least the mean coefficient");
  if (sin_.size() != cos_.size())
    throw DomainError("cosine and sine coefficient arrays differ in length");
  for (std::size_t k = 0; k < cos_.size(); ++k) {
    if (!std::isfinite(cos_[k]) || !std::isfinite(sin_[k]))
      throw DomainError("non-finite Fourier coefficient at mode " + std::to_string(k));
  }
  sin_[0] = 0.0;
  const double bound = kParityTol * coefficient_norm();
  if (parity_ == Parity::even) {
    if (max_abs(sin_) > bound)
      throw ParityError("field declared even carries sine content " +
                        std::to_string(max_abs(sin_)));
    std::fill(sin_.begin(), sin_.end(), 0.0);
  } else if (parity_ == Parity::odd) {
    if (max_abs(cos_) > bound)
      throw ParityError("field declared odd carries cosine content " +
                        std::to_string(max_abs(cos_)));
    std::fill(cos_.begin(), cos_.end(), 0.0);
  }
}

PeriodicField PeriodicField::zero(int order, Parity parity) {
  const auto n = static_cast<std::size_t>(order) + 1;
  return {std::vector<double>(n, 0.0), std::vector<double>(n, 0.0), parity};
}

PeriodicField PeriodicField::constant(int order, double value) {
  const auto n = static_cast<std::size_t>(order) + 1;
  std::vector<double> a(n, 0.0);
  a[0] = value;
  return {std::move(a), std::vector<double>(n, 0.0), Parity::even};
}

PeriodicField PeriodicField::cosine(int order, int mode, double amplitude) {
  if (mode < 0 || mode > order) throw DomainError("cosine mode outside truncation");
  const auto n = static_cast<std::size_t>(order) + 1;
  std::vector<double> a(n, 0.0);
  a[static_cast<std::size_t>(mode)] = amplitude;
  return {std::move(a), std::vector<double>(n, 0.0), Parity::even};
}

PeriodicField PeriodicField::sine(int order, int mode, double amplitude) {
  if (mode < 1 || mode > order) throw DomainError("sine mode outside truncation");
  const auto n = static_cast<std::size_t>(order) + 1;
  std::vector<double> b(n, 0.0);
  b[static_cast<std::size_t>(mode)] = amplitude;
  return {std::vector<double>(n, 0.0), std::move(b), Parity::odd};
}

double PeriodicField::coefficient_norm() const { return l2(cos_) + l2(sin_, 1); }

double PeriodicField::max_abs_coefficient() const {
  return std::max(max_abs(cos_), max_abs(sin_, 1));
}

PeriodicField PeriodicField::with_order(int order) const {
  if (order < 0) throw DomainError("negative truncation order");
  auto a = cos_;
  auto b = sin_;
  a.resize(static_cast<std::size_t>(order) + 1, 0.0);
  b.resize(static_cast<std::size_t>(order) + 1, 0.0);
  return {std::move(a), std::move(b), parity_};
}

PeriodicField PeriodicField::operator-() const { return scaled(-1.0); }

PeriodicField PeriodicField::scaled(double c) const {
  auto a = cos_;
  auto b = sin_;
  for (auto& v : a) v *= c;
  for (auto& v : b) v *= c;
  return {std::move(a), std::move(b), parity_};
}

PeriodicField PeriodicField::plus_constant(double c) const {
  auto a = cos_;
  a[0] += c;
  const Parity p = parity_ == Parity::even ? Parity::even : Parity::none;
  return {std::move(a), sin_, p};
}

PeriodicField operator+(const PeriodicField& f, const PeriodicField& g) {
  if (f.order() != g.order()) throw DomainError("adding fields of different truncation");
  auto a = f.cos_;
  auto b = f.sin_;
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] += g.cos_[k];
    b[k] += g.sin_[k];
  }
  return {std::move(a), std::move(b), sum_parity(f.parity_, g.parity_)};
}

PeriodicField operator-(const PeriodicField& f, const PeriodicField& g) { return f + (-g); }

// ---------------------------------------------------------------------------
// Grid transforms

double grid_point(int j, int grid_size) {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid_size);
}

std::vector<double> to_grid(const PeriodicField& f, int grid_size) {
  check_grid_size(f.order(), grid_size);
  const int half = grid_size / 2;
  const int order = f.order();
  const auto M = static_cast<std::size_t>(grid_size);
  std::vector<double> values(M, 0.0);

  // Symmetric part on j = 0..M/2.
  std::vector<double> even(static_cast<std::size_t>(half) + 1, 0.0);
  if (f.parity() != Parity::odd) {
    std::vector<double> in(even.size(), 0.0);
    in[0] = f.a(0);
    for (int k = 1; k <= order; ++k) in[static_cast<std::size_t>(k)] = 0.5 * f.a(k);
    dct1(in, even);
  }
  // Antisymmetric part on j = 1..M/2-1.
  std::vector<double> odd(static_cast<std::size_t>(half - 1), 0.0);
  if (f.parity() != Parity::even && !odd.empty()) {
    std::vector<double> in(odd.size(), 0.0);
    for (int k = 1; k <= order; ++k) in[static_cast<std::size_t>(k - 1)] = 0.5 * f.b(k);
    dst1(in, odd);
  }

  values[0] = even[0];
  values[static_cast<std::size_t>(half)] = even[static_cast<std::size_t>(half)];
  for (int j = 1; j < half; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    const double e = even[ju];
    const double o = odd[ju - 1];
    values[ju] = e + o;
    values[M - ju] = e - o;
  }
  return values;
}

PeriodicField from_grid(std::span<const double> values, int order, Parity parity) {
  const int grid_size = static_cast<int>(values.size());
  check_grid_size(order, grid_size);
  const int half = grid_size / 2;
  const auto M = values.size();

  double scale = 0.0;
  for (std::size_t j = 0; j < M; ++j) {
    if (!std::isfinite(values[j]))
      throw EvaluationError("non-finite collocation value", j);
    scale = std::max(scale, std::abs(values[j]));
  }

  std::vector<double> sym(static_cast<std::size_t>(half) + 1);
  std::vector<double> anti(static_cast<std::size_t>(half - 1));
  sym[0] = values[0];
  sym[static_cast<std::size_t>(half)] = values[static_cast<std::size_t>(half)];
  // odd functions vanish at x = 0 and x = pi
  double sym_max = std::max(std::abs(values[0]), std::abs(values[static_cast<std::size_t>(half)]));
  double anti_max = 0.0;
  for (int j = 1; j < half; ++j) {
    const auto ju = static_cast<std::size_t>(j);
    sym[ju] = 0.5 * (values[ju] + values[M - ju]);
    anti[ju - 1] = 0.5 * (values[ju] - values[M - ju]);
    sym_max = std::max(sym_max, std::abs(sym[ju]));
    anti_max = std::max(anti_max, std::abs(anti[ju - 1]));
  }

  const double bound = kGridParityTol * scale;
  if (parity == Parity::even && anti_max > bound)
    throw ParityError("collocation values declared even have antisymmetric part " +
                      std::to_string(anti_max));
  if (parity == Parity::odd && sym_max > bound)
    throw ParityError("collocation values declared odd have symmetric part " +
                      std::to_string(sym_max));

  const auto n = static_cast<std::size_t>(order) + 1;
  std::vector<double> a(n, 0.0), b(n, 0.0);
  const double inv = 1.0 / static_cast<double>(grid_size);
  if (parity != Parity::odd) {
    std::vector<double> out(sym.size());
    dct1(sym, out);
    a[0] = out[0] * inv;
    for (std::size_t k = 1; k < n; ++k) a[k] = 2.0 * out[k] * inv;
  }
  if (parity != Parity::even && !anti.empty()) {
    std::vector<double> out(anti.size());
    dst1(anti, out);
    for (std::size_t k = 1; k < n; ++k) b[k] = 2.0 * out[k - 1] * inv;
  }
  return {std::move(a), std::move(b), parity};
}

// ---------------------------------------------------------------------------
// Operators

PeriodicField hilbert_strip(const PeriodicField& f, double h) {
  if (!(h > 0.0)) throw DomainError("strip depth must be positive");
  const auto n = static_cast<std::size_t>(f.order()) + 1;
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double c = coth(static_cast<double>(k) * h);
    a[k] = -c * f.b(static_cast<int>(k));
    b[k] = c * f.a(static_cast<int>(k));
  }
  Parity p = Parity::none;
  if (f.parity() == Parity::even) p = Parity::odd;
  if (f.parity() == Parity::odd) p = Parity::even;
  return {std::move(a), std::move(b), p};
}

PeriodicField dirichlet_neumann(const PeriodicField& f, double h) {
  if (!(h > 0.0)) throw DomainError("strip depth must be positive");
  // Mode-wise: a_k cos(kx) -> k coth(kh) a_k cos(kx), likewise for sines.
  const auto n = static_cast<std::size_t>(f.order()) + 1;
  std::vector<double> a(n, 0.0), b(n, 0.0);
  a[0] = f.a(0) / h;
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double m = kk * coth(kk * h);
    a[k] = m * f.a(static_cast<int>(k));
    b[k] = m * f.b(static_cast<int>(k));
  }
  return {std::move(a), std::move(b), f.parity()};
}

PeriodicField differentiate(const PeriodicField& f, int order) {
  if (order < 1 || order > 4) throw DomainError("differentiation order must be 1..4");
  const auto n = static_cast<std::size_t>(f.order()) + 1;
  std::vector<double> a(n, 0.0), b(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    const double ak = f.a(static_cast<int>(k));
    const double bk = f.b(static_cast<int>(k));
    const double s = std::pow(kk, order);
    // d/dx: a cos + b sin -> k (b cos - a sin)
    switch (order % 4) {
      case 1:
        a[k] = s * bk;
        b[k] = -s * ak;
        break;
      case 2:
        a[k] = -s * ak;
        b[k] = -s * bk;
        break;
      case 3:
        a[k] = -s * bk;
        b[k] = s * ak;
        break;
      case 0:
        a[k] = s * ak;
        b[k] = s * bk;
        break;
    }
  }
  Parity p = f.parity();
  if (order % 2 == 1 && p != Parity::none) p = (p == Parity::even) ? Parity::odd : Parity::even;
  return {std::move(a), std::move(b), p};
}

PeriodicField multiply(const PeriodicField& f, const PeriodicField& g, int grid_size) {
  if (f.order() != g.order())
    throw DomainError("multiplying fields of different truncation (" +
                      std::to_string(f.order()) + " vs " + std::to_string(g.order()) + ")");
  const int M = grid_size > 0 ? grid_size : collocation_size(f.order());
  auto u = to_grid(f, M);
  const auto v = to_grid(g, M);
  for (std::size_t j = 0; j < u.size(); ++j) u[j] *= v[j];
  return from_grid(u, f.order(), product_parity(f.parity(), g.parity()));
}

double mean(const PeriodicField& f) { return f.a(0); }

double evaluate(const PeriodicField& f, double x) {
  double s = f.a(0);
  for (int k = 1; k <= f.order(); ++k) {
    const double kx = static_cast<double>(k) * x;
    s += f.a(k) * std::cos(kx) + f.b(k) * std::sin(kx);
  }
  return s;
}

double l2_pairing(const PeriodicField& f, const PeriodicField& g) {
  if (f.order() != g.order()) throw DomainError("pairing fields of different truncation");
  double s = f.a(0) * g.a(0);
  for (int k = 1; k <= f.order(); ++k) s += 0.5 * (f.a(k) * g.a(k) + f.b(k) * g.b(k));
  return s;
}

namespace detail {

PeriodicField compose_impl(const std::function<double(const double*)>& fn,
                           std::initializer_list<const PeriodicField*> fields,
                           std::optional<Parity> parity, int grid_size) {
  const int order = (*fields.begin())->order();
  bool all_even = true;
  for (const auto* f : fields) {
    if (f->order() != order) throw DomainError("composing fields of different truncation");
    all_even = all_even && f->parity() == Parity::even;
  }
  const Parity out_parity = parity.value_or(all_even ? Parity::even : Parity::none);
  const int M = grid_size > 0 ? grid_size : collocation_size(order);
  std::vector<std::vector<double>> grids;
  grids.reserve(fields.size());
  for (const auto* f : fields) grids.push_back(to_grid(*f, M));

  std::vector<double> args(fields.size());
  std::vector<double> out(static_cast<std::size_t>(M));
  for (std::size_t j = 0; j < out.size(); ++j) {
    for (std::size_t i = 0; i < grids.size(); ++i) args[i] = grids[i][j];
    const double v = fn(args.data());
    if (!std::isfinite(v)) throw EvaluationError("pointwise composition is undefined", j);
    out[j] = v;
  }
  return from_grid(out, order, out_parity);
}

}  // namespace detail

StripGeometry StripGeometry::make(double h, double g, int N, int M) {
  if (!(h > 0.0)) throw DomainError("depth h must be positive");
  if (!(g > 0.0)) throw DomainError("gravity g must be positive");
  if (N < 1) throw DomainError("truncation N must be at least 1");
  if (M == 0) M = collocation_size(N);
  if (M % 2 != 0 || M < 3 * N || M < 4)
    throw DomainError("collocation size M must be even and at least 3N");
  return StripGeometry{h, g, N, M};
}

}  // namespace hydroelastic
