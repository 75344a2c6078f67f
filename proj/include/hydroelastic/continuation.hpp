#pragma once

// Newton correction and pseudo-arclength path following for the reduced
// operator, with branch switching at simple and resonant eigenvalues.
//
// Unknown vector along a branch: z = (theta, a_1..a_N, lambda).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "hydroelastic/bifurcation.hpp"
#include "hydroelastic/residual.hpp"

namespace hydroelastic {

/// Linear constraint <z - z_ref, tangent> = step closing the system when
/// lambda is free.
struct ArclengthConstraint {
  Eigen::VectorXd z_ref;
  Eigen::VectorXd tangent;
  double step = 0.0;
};

struct NewtonOptions {
  /// Residual tolerance on max |F_k| (and the constraint). A non-positive
  /// value selects 1e-10 (1 + lambda^2).
  double tol = 0.0;
  int max_iter = 25;
  int max_halvings = 8;
};

struct NewtonResult {
  SurfaceState state;
  int iterations = 0;
  double residual_norm = 0.0;
  /// Residual before the first step and after each accepted step.
  std::vector<double> history;
  /// Reciprocal condition estimate of the last factorized Jacobian (1 when no
  /// factorization was needed).
  double rcond = 1.0;
};

double default_tolerance(double lambda);

/// Solves F = 0 from `guess`. Without a constraint lambda stays fixed; with one
/// lambda is an unknown and the constraint row is appended. Throws
/// ConvergenceError, SingularMatrixError or DegenerateProfileError.
NewtonResult newton_correct(const SurfaceState& guess, const EnergyModel& model,
                            const StripGeometry& geom, const NewtonOptions& options = {},
                            const std::optional<ArclengthConstraint>& constraint = std::nullopt);

Eigen::VectorXd pack_branch_unknowns(const SurfaceState& state);
SurfaceState unpack_branch_unknowns(const Eigen::VectorXd& z, double gamma);

/// Jacobian of (F_0..F_N) in z, size (N+1) x (N+2): finite differences in
/// (theta, a) and the exact lambda derivative in the last column.
Eigen::MatrixXd branch_jacobian(const SurfaceState& state, const EnergyModel& model,
                                const StripGeometry& geom);

/// Sign and log|det| of the square matrix [branch_jacobian; tangent^T].
struct BorderedDeterminant {
  int sign = 0;
  double log_abs = 0.0;
};
BorderedDeterminant bordered_determinant(const Eigen::MatrixXd& jac, const Eigen::VectorXd& tangent);

/// True when X(x) = x + C_h(w)(x) is strictly increasing on the grid,
/// including the wrap to the next period.
bool surface_is_injective(const PeriodicField& w, const StripGeometry& geom);

struct BranchPoint {
  SurfaceState state;
  double arclength = 0.0;
  double residual_norm = 0.0;
  double amplitude = 0.0;
  /// Up to three (k, |a_k|) pairs in decreasing magnitude.
  std::vector<std::pair<int, double>> dominant_modes;
};

BranchPoint make_branch_point(const SurfaceState& state, double arclength, double residual_norm,
                              const StripGeometry& geom);

enum class BranchKind { trivial, primary, secondary };
std::string_view to_string(BranchKind k);
BranchKind parse_branch_kind(std::string_view text);

struct BranchParent {
  int branch_id = 0;
  int point_index = 0;
};

struct Branch {
  int id = 0;
  BranchKind kind = BranchKind::primary;
  int n = 1;
  Sign sign = Sign::plus;
  double gamma = 0.0;
  double ds = 0.0;
  std::vector<BranchPoint> points;
  std::optional<BranchParent> parent;
  /// Sign of a_n on the first step away from the trivial state (primary only).
  int direction = 1;
  bool aborted = false;
  std::string message;
};

struct ContinuationOptions {
  /// Nominal step; non-positive selects 1e-3 max(1, |lambda*|).
  double ds = 0.0;
  int n_steps = 200;
  /// Steps taken along each half of a secondary branch.
  int secondary_steps = 20;
  int max_step_halvings = 6;
  NewtonOptions newton;
};

double default_step(double lambda_star);

/// Follows the branch bifurcating from the trivial state at lambda*_{n,sign}.
/// Requires classify_kernel there to report simple(n, sign). Failures after
/// the allowed step halvings end the trace with `aborted` set.
Branch trace_primary(int n, Sign sign, double gamma, const EnergyModel& model,
                     const StripGeometry& geom, const ContinuationOptions& options = {});

struct SecondaryResult {
  /// Mode-n primary branch, traced first and monitored.
  Branch primary;
  /// Mode-2n primary branches (leaving along +cos(2nx), then -cos(2nx)),
  /// traced when the mode-n branch shows no sign change.
  std::vector<Branch> companions;
  /// Half-branches leaving the detected point along +phi and -phi.
  Branch secondary_plus;
  Branch secondary_minus;
  bool found = false;
  std::string message;
  double gamma_star = 0.0;
  double gamma = 0.0;
  /// Id of the branch carrying the detected point (primary or a companion).
  int host_id = -1;
  std::optional<BranchPoint> bifurcation_point;
  Eigen::VectorXd null_direction;
  /// Bordered-determinant sign at every point of the host branch.
  std::vector<int> determinant_signs;

  const Branch* host() const;
};

/// Traces primary branches at gamma = gamma_res + delta, where gamma_res is the
/// resonant vorticity with lambda*_{n,sign} = lambda*_{2n,sign}, watching the
/// bordered determinant for a sign change. The mode-n branch is searched first,
/// then the mode-2n branch in both directions (the 2pi/(2n)-periodic subspace is
/// invariant, so a secondary bifurcation generically sits on it). The crossing
/// is located by bisection and both halves of the bifurcating branch are
/// followed. No sign change is reported through `found`, not thrown.
SecondaryResult trace_secondary(int n, Sign sign, double delta, const EnergyModel& model,
                                const StripGeometry& geom, const ContinuationOptions& options = {});

/// Resonant vorticity for (n, 2n) whose matching roots carry `sign`.
double resonant_gamma(int n, Sign sign, const EnergyModel& model, const StripGeometry& geom);

struct InvariantCheck {
  std::string name;
  bool passed = true;
  /// Violations that do not invalidate the data are flagged as warnings.
  bool warning_only = false;
  std::string detail;
};

/// Re-evaluates every point: residual, evenness, zero mean, arclength
/// monotonicity and step spacing.
std::vector<InvariantCheck> check_branch_invariants(const Branch& branch, const EnergyModel& model,
                                                    const StripGeometry& geom, double tol);

}  // namespace hydroelastic
