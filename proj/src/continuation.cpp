#include "hydroelastic/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "hydroelastic/errors.hpp"

namespace hydroelastic {

double default_tolerance(double lambda) { return 1e-10 * (1.0 + lambda * lambda); }

double default_step(double lambda_star) { return 1e-3 * std::max(1.0, std::abs(lambda_star)); }

Eigen::VectorXd pack_branch_unknowns(const SurfaceState& state) {
  const int N = state.w.order();
  Eigen::VectorXd z(N + 2);
  z.head(N + 1) = pack_unknowns(state);
  z[N + 1] = state.lambda;
  return z;
}

SurfaceState unpack_branch_unknowns(const Eigen::VectorXd& z, double gamma) {
  const Eigen::Index n = z.size() - 1;
  return unpack_unknowns(z.head(n), z[n], gamma);
}

Eigen::MatrixXd branch_jacobian(const SurfaceState& state, const EnergyModel& model,
                                const StripGeometry& geom) {
  const int N = state.w.order();
  Eigen::MatrixXd J(N + 1, N + 2);
  J.leftCols(N + 1) = jacobian(state, model, geom, JacobianMode::finite_difference);
  J.col(N + 1) = residual_vector(evaluate_F_and_lambda_derivative(state, model, geom).dF_dlambda);
  return J;
}

BorderedDeterminant bordered_determinant(const Eigen::MatrixXd& jac, const Eigen::VectorXd& tangent) {
  const Eigen::Index n = jac.cols();
  Eigen::MatrixXd A(n, n);
  A.topRows(n - 1) = jac;
  A.row(n - 1) = tangent.transpose();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
  const Eigen::MatrixXd& LU = lu.matrixLU();
  BorderedDeterminant d;
  d.sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = LU(i, i);
    if (u == 0.0) {
      d.sign = 0;
      d.log_abs = -std::numeric_limits<double>::infinity();
      return d;
    }
    if (u < 0.0) d.sign = -d.sign;
    d.log_abs += std::log(std::abs(u));
  }
  return d;
}

NewtonResult newton_correct(const SurfaceState& guess, const EnergyModel& model,
                            const StripGeometry& geom, const NewtonOptions& options,
                            const std::optional<ArclengthConstraint>& constraint) {
  guess.validate();
  const int N = guess.w.order();
  const double gamma = guess.gamma;
  const bool free_lambda = constraint.has_value();
  if (free_lambda && (constraint->z_ref.size() != N + 2 || constraint->tangent.size() != N + 2))
    throw DomainError("arclength constraint has the wrong dimension");

  auto to_state = [&](const Eigen::VectorXd& z) {
    return free_lambda ? unpack_branch_unknowns(z, gamma) : unpack_unknowns(z, guess.lambda, gamma);
  };
  auto residual = [&](const Eigen::VectorXd& z) {
    const auto F = residual_vector(evaluate_F(to_state(z), model, geom));
    if (!free_lambda) return Eigen::VectorXd(F);
    Eigen::VectorXd r(N + 2);
    r.head(N + 1) = F;
    r[N + 1] = (z - constraint->z_ref).dot(constraint->tangent) - constraint->step;
    return r;
  };
  auto tolerance = [&](const Eigen::VectorXd& z) {
    return options.tol > 0.0 ? options.tol : default_tolerance(free_lambda ? z[N + 1] : guess.lambda);
  };

  Eigen::VectorXd z = free_lambda ? pack_branch_unknowns(guess) : pack_unknowns(guess);
  Eigen::VectorXd r = residual(z);
  NewtonResult out;
  double norm = r.lpNorm<Eigen::Infinity>();
  out.history.push_back(norm);

  for (int it = 0;; ++it) {
    if (!std::isfinite(norm)) throw ConvergenceError("Newton residual is not finite");
    if (norm <= tolerance(z)) {
      out.state = to_state(z);
      out.iterations = it;
      out.residual_norm = norm;
      return out;
    }
    if (it == options.max_iter)
      throw ConvergenceError("Newton did not converge in " + std::to_string(options.max_iter) +
                             " iterations (residual " + std::to_string(norm) + ")");

    const auto state = to_state(z);
    Eigen::MatrixXd J;
    if (free_lambda) {
      J.resize(N + 2, N + 2);
      J.topRows(N + 1) = branch_jacobian(state, model, geom);
      J.row(N + 1) = constraint->tangent.transpose();
    } else {
      J = jacobian(state, model, geom, JacobianMode::finite_difference);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(J);
    out.rcond = lu.rcond();
    const bool zero_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff() == 0.0;
    if (zero_pivot || !(out.rcond > 1e-15))
      throw SingularMatrixError("Newton Jacobian is singular (rcond " + std::to_string(out.rcond) + ")");
    const Eigen::VectorXd dz = lu.solve(-r);
    if (!dz.allFinite()) throw SingularMatrixError("Newton step is not finite");

    double alpha = 1.0;
    bool accepted = false;
    for (int k = 0; k <= options.max_halvings; ++k, alpha *= 0.5) {
      const Eigen::VectorXd trial = z + alpha * dz;
      Eigen::VectorXd rt;
      try {
        rt = residual(trial);
      } catch (const DegenerateProfileError&) {
        continue;
      }
      const double nt = rt.lpNorm<Eigen::Infinity>();
      if (nt < norm) {
        z = trial;
        r = rt;
        norm = nt;
        accepted = true;
        break;
      }
    }
    if (!accepted)
      throw ConvergenceError("damped Newton step could not reduce the residual below " +
                             std::to_string(norm));
    out.history.push_back(norm);
  }
}

bool surface_is_injective(const PeriodicField& w, const StripGeometry& geom) {
  const auto c = to_grid(hilbert_strip(w, geom.h), geom.M);
  const int M = geom.M;
  std::vector<double> X(static_cast<std::size_t>(M));
  for (int j = 0; j < M; ++j) X[static_cast<std::size_t>(j)] = grid_point(j, M) + c[static_cast<std::size_t>(j)];
  for (int j = 0; j + 1 < M; ++j)
    if (!(X[static_cast<std::size_t>(j + 1)] > X[static_cast<std::size_t>(j)])) return false;
  return X.front() + 2.0 * std::numbers::pi > X.back();
}

BranchPoint make_branch_point(const SurfaceState& state, double arclength, double residual_norm,
                              const StripGeometry& geom) {
  BranchPoint p;
  p.state = state;
  p.arclength = arclength;
  p.residual_norm = residual_norm;
  for (double v : to_grid(state.w, geom.M)) p.amplitude = std::max(p.amplitude, std::abs(v));
  std::vector<std::pair<int, double>> modes;
  for (int k = 1; k <= state.w.order(); ++k) modes.emplace_back(k, std::abs(state.w.a(k)));
  std::stable_sort(modes.begin(), modes.end(),
                   [](const auto& x, const auto& y) { return x.second > y.second; });
  modes.resize(std::min<std::size_t>(3, modes.size()));
  p.dominant_modes = std::move(modes);
  return p;
}

std::string_view to_string(BranchKind k) {
  switch (k) {
    case BranchKind::trivial:
      return "trivial";
    case BranchKind::primary:
      return "primary";
    case BranchKind::secondary:
      return "secondary";
  }
  return "primary";
}

BranchKind parse_branch_kind(std::string_view text) {
  if (text == "trivial") return BranchKind::trivial;
  if (text == "primary") return BranchKind::primary;
  if (text == "secondary") return BranchKind::secondary;
  throw DomainError("unknown branch kind '" + std::string(text) + "'");
}

namespace {

struct Corrected {
  Eigen::VectorXd z;
  NewtonResult newton;
};

Corrected correct_along(const Eigen::VectorXd& z_ref, const Eigen::VectorXd& tangent, double step,
                        const Eigen::VectorXd& predictor, double gamma, const EnergyModel& model,
                        const StripGeometry& geom, const NewtonOptions& options) {
  ArclengthConstraint c{z_ref, tangent, step};
  auto res = newton_correct(unpack_branch_unknowns(predictor, gamma), model, geom, options, c);
  return {pack_branch_unknowns(res.state), std::move(res)};
}

/// Called after each accepted point with (index, z, tangent used to reach it,
/// step used). Returning true stops the trace.
using StepMonitor = std::function<bool(std::size_t, const Eigen::VectorXd&, const Eigen::VectorXd&,
                                        const Eigen::VectorXd&, double)>;

void follow(Branch& branch, Eigen::VectorXd z_prev, Eigen::VectorXd tangent, double s_prev,
            double first_step, int n_steps, const EnergyModel& model, const StripGeometry& geom,
            const ContinuationOptions& options, const StepMonitor& monitor = {}) {
  double nominal = first_step;
  for (int step = 0; step < n_steps; ++step) {
    double h = nominal;
    std::optional<Corrected> got;
    std::string failure;
    for (int attempt = 0; attempt <= options.max_step_halvings; ++attempt, h *= 0.5) {
      try {
        got = correct_along(z_prev, tangent, h, z_prev + h * tangent, branch.gamma, model, geom,
                            options.newton);
        break;
      } catch (const ConvergenceError& e) {
        failure = e.what();
      } catch (const SingularMatrixError& e) {
        failure = e.what();
      } catch (const DegenerateProfileError& e) {
        failure = e.what();
      }
    }
    if (!got) {
      branch.aborted = true;
      branch.message = "corrector failed after " + std::to_string(options.max_step_halvings) +
                       " step halvings: " + failure;
      return;
    }
    if (!surface_is_injective(got->newton.state.w, geom)) {
      branch.aborted = true;
      branch.message = "surface profile self-intersects; point rejected";
      return;
    }
    const Eigen::VectorXd diff = got->z - z_prev;
    const double chord = diff.norm();
    s_prev += chord;
    branch.points.push_back(make_branch_point(got->newton.state, s_prev, got->newton.residual_norm, geom));
    const Eigen::VectorXd used = tangent;
    const Eigen::VectorXd z_used_from = z_prev;
    tangent = diff / chord;
    z_prev = got->z;
    nominal = branch.ds;
    if (monitor && monitor(branch.points.size() - 1, z_prev, z_used_from, used, h)) return;
  }
}

void check_geometry(int n, const StripGeometry& geom) {
  if (n < 1 || n > geom.N) throw DomainError("mode " + std::to_string(n) + " outside truncation");
}

}  // namespace

namespace {

struct Crossing {
  std::size_t index;  // point before the sign change
  Eigen::VectorXd z_from;
  Eigen::VectorXd z_to;
  Eigen::VectorXd tangent;
  double step;
};

Branch primary_skeleton(int n, Sign sign, double gamma, double ds, int direction) {
  Branch b;
  b.kind = BranchKind::primary;
  b.n = n;
  b.sign = sign;
  b.gamma = gamma;
  b.ds = ds;
  b.direction = direction;
  return b;
}

void require_simple(int n, Sign sign, double lam, double gamma, const EnergyModel& model,
                    const StripGeometry& geom) {
  const auto kc = classify_kernel(lam, gamma, model, geom, geom.N);
  if (kc.kind != KernelClass::Kind::simple || kc.n != n)
    throw DomainError("kernel at lambda*_{" + std::to_string(n) + "," + std::string(to_string(sign)) +
                      "} is " + describe(kc) + ", not simple");
}

/// Primary trace from the trivial state; with `signs` set, the bordered
/// determinant is recorded at every point and the trace stops at the first
/// sign change.
std::optional<Crossing> run_primary(Branch& b, const EnergyModel& model, const StripGeometry& geom,
                                    const ContinuationOptions& options, int n_steps,
                                    std::vector<int>* signs) {
  const double lam = lambda_star(b.n, b.sign, b.gamma, model, geom);
  const auto z0 = pack_branch_unknowns(SurfaceState::trivial(geom.N, lam, b.gamma));
  Eigen::VectorXd t0 = Eigen::VectorXd::Zero(z0.size());
  t0[b.n] = b.direction;
  std::optional<Crossing> crossing;
  StepMonitor monitor;
  if (signs) {
    monitor = [&](std::size_t idx, const Eigen::VectorXd& z, const Eigen::VectorXd& z_from,
                  const Eigen::VectorXd& used, double step) {
      const Eigen::VectorXd secant = (z - z_from).normalized();
      const auto J = branch_jacobian(unpack_branch_unknowns(z, b.gamma), model, geom);
      const int s = bordered_determinant(J, secant).sign;
      signs->push_back(s);
      const std::size_t m = signs->size();
      if (m >= 2 && idx >= 1 && s != 0 && (*signs)[m - 2] != 0 && s != (*signs)[m - 2]) {
        crossing = Crossing{idx - 1, z_from, z, used, step};
        return true;
      }
      return false;
    };
  }
  follow(b, z0, t0, 0.0, b.ds, n_steps, model, geom, options, monitor);
  return crossing;
}

}  // namespace

Branch trace_primary(int n, Sign sign, double gamma, const EnergyModel& model,
                     const StripGeometry& geom, const ContinuationOptions& options) {
  check_geometry(n, geom);
  if (options.n_steps < 0) throw DomainError("n_steps must be non-negative");
  const double lam = lambda_star(n, sign, gamma, model, geom);
  require_simple(n, sign, lam, gamma, model, geom);
  Branch b = primary_skeleton(n, sign, gamma, options.ds > 0.0 ? options.ds : default_step(lam), 1);
  run_primary(b, model, geom, options, options.n_steps, nullptr);
  return b;
}

double resonant_gamma(int n, Sign sign, const EnergyModel& model, const StripGeometry& geom) {
  const double g = std::sqrt(gamma_star_squared(n, 2 * n, model, geom));
  return resonant_sign(n, 2 * n, g, model, geom) == sign ? g : -g;
}

const Branch* SecondaryResult::host() const {
  if (host_id == primary.id) return &primary;
  for (const auto& c : companions)
    if (c.id == host_id) return &c;
  return nullptr;
}

SecondaryResult trace_secondary(int n, Sign sign, double delta, const EnergyModel& model,
                                const StripGeometry& geom, const ContinuationOptions& options) {
  check_geometry(2 * n, geom);
  if (options.n_steps < 0) throw DomainError("n_steps must be non-negative");
  SecondaryResult out;
  out.gamma_star = resonant_gamma(n, sign, model, geom);
  const double delta_max = 0.1 * std::abs(out.gamma_star);
  if (!(std::abs(delta) > 0.0) || std::abs(delta) > delta_max)
    throw DomainError("delta must satisfy 0 < |delta| <= " + std::to_string(delta_max));
  const double lam_res = lambda_star(n, sign, out.gamma_star, model, geom);
  const auto kc = classify_kernel(lam_res, out.gamma_star, model, geom, geom.N);
  if (kc.kind != KernelClass::Kind::double_root || kc.n != n || kc.m != 2 * n)
    throw InconsistencyError("kernel at the resonance is " + describe(kc) + ", expected double(" +
                             std::to_string(n) + "," + std::to_string(2 * n) + ")");

  out.gamma = out.gamma_star + delta;
  const double gamma = out.gamma;
  const double lam_n = lambda_star(n, sign, gamma, model, geom);
  const double lam_2n = lambda_star(2 * n, sign, gamma, model, geom);
  require_simple(n, sign, lam_n, gamma, model, geom);
  require_simple(2 * n, sign, lam_2n, gamma, model, geom);
  const double ds = options.ds > 0.0 ? options.ds : default_step(lam_n);

  out.primary = primary_skeleton(n, sign, gamma, ds, 1);
  out.primary.id = 0;
  std::vector<int> signs;
  auto crossing = run_primary(out.primary, model, geom, options, options.n_steps, &signs);
  Branch* host = &out.primary;
  if (!crossing) {
    out.companions.reserve(2);
    for (int direction : {1, -1}) {
      out.companions.push_back(primary_skeleton(2 * n, sign, gamma, ds, direction));
      Branch& c = out.companions.back();
      c.id = static_cast<int>(out.companions.size());
      std::vector<int> c_signs;
      crossing = run_primary(c, model, geom, options, options.n_steps, &c_signs);
      if (crossing) {
        host = &c;
        signs = std::move(c_signs);
        break;
      }
    }
  }
  out.determinant_signs = signs;

  if (!crossing) {
    out.message = "no sign change of the bordered determinant along the mode-" + std::to_string(n) +
                  " branch or either half of the mode-" + std::to_string(2 * n) + " branch";
    return out;
  }
  out.host_id = host->id;

  // Bisection in the step parameter along the tangent used to reach the
  // point after the sign change; the determinant uses that same tangent.
  const auto& cr = *crossing;
  auto sign_at = [&](const Eigen::VectorXd& z) {
    const auto J = branch_jacobian(unpack_branch_unknowns(z, gamma), model, geom);
    return bordered_determinant(J, cr.tangent).sign;
  };
  auto solve_at = [&](double tau) {
    const Eigen::VectorXd pred = cr.z_from + (tau / cr.step) * (cr.z_to - cr.z_from);
    return correct_along(cr.z_from, cr.tangent, tau, pred, gamma, model, geom, options.newton);
  };

  double lo = 0.0, hi = cr.step;
  const int s_lo = sign_at(cr.z_from);
  const int s_hi = sign_at(cr.z_to);
  Eigen::VectorXd z_b;
  NewtonResult newton_b;
  bool have_b = false;
  if (s_lo != s_hi && s_lo != 0 && s_hi != 0) {
    while (hi - lo > 1e-8 * ds) {
      const double mid = 0.5 * (lo + hi);
      Corrected c;
      try {
        c = solve_at(mid);
      } catch (const Error&) {
        break;
      }
      const int sm = sign_at(c.z);
      if (sm == s_lo) {
        lo = mid;
      } else {
        hi = mid;
      }
      z_b = c.z;
      newton_b = c.newton;
      have_b = true;
      if (sm == 0) break;
    }
  }
  if (!have_b) {
    auto c = solve_at(0.5 * (lo + hi));
    z_b = c.z;
    newton_b = c.newton;
  }

  const auto& before = host->points[cr.index];
  const double s_b = before.arclength + (z_b - cr.z_from).norm();
  const auto state_b = unpack_branch_unknowns(z_b, gamma);
  out.bifurcation_point = make_branch_point(state_b, s_b, newton_b.residual_norm, geom);

  // Null vector of the bordered matrix, with the branch tangent removed and
  // its largest Fourier component made positive.
  Eigen::MatrixXd A(z_b.size(), z_b.size());
  A.topRows(z_b.size() - 1) = branch_jacobian(state_b, model, geom);
  A.row(z_b.size() - 1) = cr.tangent.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  Eigen::VectorXd phi = svd.matrixV().col(A.cols() - 1);
  phi -= phi.dot(cr.tangent) * cr.tangent;
  phi.normalize();
  Eigen::Index lead = 1;
  phi.segment(1, geom.N).cwiseAbs().maxCoeff(&lead);
  if (phi[lead + 1] < 0.0) phi = -phi;
  out.null_direction = phi;

  const BranchParent parent{host->id, static_cast<int>(cr.index)};
  const int first_id = 1 + static_cast<int>(out.companions.size());
  auto half = [&](double orientation, int id) {
    Branch b;
    b.id = id;
    b.kind = BranchKind::secondary;
    b.n = n;
    b.sign = sign;
    b.gamma = gamma;
    b.ds = ds;
    b.parent = parent;
    b.direction = orientation > 0 ? 1 : -1;
    follow(b, z_b, orientation * phi, s_b, 0.1 * ds, options.secondary_steps, model, geom, options);
    return b;
  };
  out.secondary_plus = half(1.0, first_id);
  out.secondary_minus = half(-1.0, first_id + 1);
  out.found = true;
  out.message = "secondary bifurcation on the mode-" + std::to_string(host->n) +
                " branch between points " + std::to_string(cr.index) + " and " +
                std::to_string(cr.index + 1);
  return out;
}

std::vector<InvariantCheck> check_branch_invariants(const Branch& branch, const EnergyModel& model,
                                                    const StripGeometry& geom, double tol) {
  std::vector<InvariantCheck> out;
  InvariantCheck residual{"residual", true, false, ""};
  InvariantCheck parity{"even_zero_mean", true, false, ""};
  InvariantCheck monotone{"arclength_increasing", true, false, ""};
  InvariantCheck spacing{"step_spacing", true, true, ""};
  double prev_s = branch.parent ? -std::numeric_limits<double>::infinity() : 0.0;
  std::optional<Eigen::VectorXd> prev_z;
  for (std::size_t i = 0; i < branch.points.size(); ++i) {
    const auto& p = branch.points[i];
    const auto& st = p.state;
    const std::string at = " at point " + std::to_string(i);
    if (st.w.parity() != Parity::even || std::abs(mean(st.w)) > 1e-13) {
      parity.passed = false;
      parity.detail = "w not even with zero mean" + at;
    }
    const double limit = tol > 0.0 ? tol : default_tolerance(st.lambda);
    double r = std::numeric_limits<double>::infinity();
    try {
      r = evaluate_F(st, model, geom).max_abs_coefficient();
    } catch (const Error&) {
    }
    if (!(r <= limit)) {
      residual.passed = false;
      residual.detail = "residual " + std::to_string(r) + at;
    }
    if (!(p.arclength > prev_s)) {
      monotone.passed = false;
      monotone.detail = "arclength not increasing" + at;
    }
    prev_s = p.arclength;
    const auto z = pack_branch_unknowns(st);
    if (prev_z && branch.ds > 0.0) {
      const double chord = (z - *prev_z).norm();
      if (chord < 0.1 * branch.ds || chord > 10.0 * branch.ds) {
        spacing.passed = false;
        spacing.detail = "spacing " + std::to_string(chord) + " outside [0.1 ds, 10 ds]" + at;
      }
    }
    prev_z = z;
  }
  out.push_back(residual);
  out.push_back(parity);
  out.push_back(monotone);
  out.push_back(spacing);
  return out;
}

}  // namespace hydroelastic
