#pragma once

// Perturbation of an m-accretive T by an accretive A under the hypothesis
//
//     Re<Tx, Ax> >= c ||Ax||^2   for all x,
//
// equivalently H - cG >= 0 with H = (A*T + T*A)/2 and G = A*A. This header
// computes the optimal constant b, the angle/constant predictions derived
// from it, and one checker per inequality in the invertibility argument
// for t + T + A.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "accretive/accretivity.hpp"
#include "accretive/rng.hpp"

namespace accretive {

enum class PairFamily { Diagonal, ScalarMultiple, Rotated, Adversarial, User };

inline std::string_view to_string(PairFamily f) {
  switch (f) {
    case PairFamily::Diagonal: return "diagonal";
    case PairFamily::ScalarMultiple: return "scalar-multiple";
    case PairFamily::Rotated: return "rotated";
    case PairFamily::Adversarial: return "adversarial";
    case PairFamily::User: return "user";
  }
  return "user";
}

inline PairFamily parse_family(std::string_view name) {
  for (PairFamily f : {PairFamily::Diagonal, PairFamily::ScalarMultiple, PairFamily::Rotated,
                       PairFamily::Adversarial, PairFamily::User})
    if (to_string(f) == name) return f;
  fail(ErrorKind::InvalidArgument, "unknown family '" + std::string(name) + "'");
}

struct OperatorPair {
  ComplexMatrix T;
  ComplexMatrix A;
  PairFamily family = PairFamily::User;
  std::optional<std::uint64_t> seed;

  Eigen::Index dim() const { return T.rows(); }
  ComplexMatrix sum() const { return T + A; }
};

inline void validate_pair(const OperatorPair& p) {
  validate_matrix(p.T, "T");
  validate_matrix(p.A, "A");
  require_same_dim(p.T, p.A);
}

// ---------------------------------------------------------------------------
// Optimal constant b

enum class BKind { Finite, Infinite, ConditionFails };

struct OptimalConstant {
  BKind kind = BKind::ConditionFails;
  double value = 0.0;      // b when finite
  double pencil = 0.0;     // reduced-pencil estimate
  double bisection = 0.0;  // bisection estimate
  std::string reason;      // why the condition fails, when it does

  bool finite() const { return kind == BKind::Finite; }
  bool sectorial() const { return finite() && value > 1.0; }
};

struct ConditionMatrices {
  ComplexMatrix H;  // x*Hx = Re<Tx, Ax>
  ComplexMatrix G;  // x*Gx = ||Ax||^2
};

inline ConditionMatrices condition_matrices(const OperatorPair& p) {
  const ComplexMatrix at = p.A.adjoint() * p.T;
  return {hermitian_part(at), p.A.adjoint() * p.A};
}

namespace detail {

inline double bisection_slack(const ConditionMatrices& m, double c) {
  const double n = static_cast<double>(m.H.rows());
  return 64.0 * n * std::numeric_limits<double>::epsilon() * (m.H.norm() + c * m.G.norm());
}

inline bool feasible(const ConditionMatrices& m, double c) {
  const ComplexMatrix d = m.H - c * m.G;
  return hermitian_eigen(d, false).eigenvalues()(0) >= -bisection_slack(m, c);
}

// Largest c with H - cG >= 0 by bisection on the full matrix; never looks at
// the kernel split used by the pencil route.
inline double b_by_bisection(const ConditionMatrices& m, const ComplexMatrix& a) {
  if (!feasible(m, 0.0)) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const ComplexVector v = svd.matrixV().col(0);
  const double gv = v.dot(m.G * v).real();
  double hi = std::max(v.dot(m.H * v).real() / gv, 0.0) * (1.0 + 1e-12) + 1e-300;
  for (int k = 0; k < 64 && feasible(m, hi); ++k) hi *= 2.0;
  double lo = 0.0;
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (feasible(m, mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace detail

/// Optimal constant b = max{c >= 0 : H - cG >= 0}. Two routes: a reduced
/// Hermitian-definite pencil on the orthocomplement of ker A, and bisection
/// on c -> lambda_min(H - cG). They must agree to 1e-8 relative.
inline OptimalConstant compute_b(const OperatorPair& p, const ToleranceConfig& tol = {}) {
  validate_pair(p);
  tol.validate();
  OptimalConstant out;
  const double t_norm = operator_norm(p.T);
  const double a_norm = operator_norm(p.A);
  if (a_norm <= tol.rank_tol * (t_norm > 0.0 ? t_norm : 1.0)) {
    out.kind = BKind::Infinite;
    out.value = std::numeric_limits<double>::infinity();
    out.pencil = out.bisection = out.value;
    out.reason = "A vanishes: inequality holds for every c";
    return out;
  }
  const ConditionMatrices m = condition_matrices(p);
  const double h_scale = std::max(t_norm * a_norm, std::numeric_limits<double>::min());

  const double h_min = hermitian_eigen(m.H, false).eigenvalues()(0);
  if (h_min < -tol.eig_tol * h_scale) {
    out.kind = BKind::ConditionFails;
    out.reason = "Re<Tx, Ax> takes negative values (lambda_min(H) = " + std::to_string(h_min) + ")";
    return out;
  }

  Eigen::JacobiSVD<ComplexMatrix> svd(p.A, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol.rank_tol * sv(0)) ++rank;
  const ComplexMatrix v1 = svd.matrixV().leftCols(rank);
  if (rank < p.dim()) {
    const ComplexMatrix v0 = svd.matrixV().rightCols(p.dim() - rank);
    const double coupling = operator_norm(v1.adjoint() * m.H * v0);
    if (coupling > tol.eig_tol * h_scale) {
      out.kind = BKind::ConditionFails;
      out.reason = "H couples ker A to its complement (norm " + std::to_string(coupling) + ")";
      return out;
    }
  }
  const ComplexMatrix h11 = hermitian_part(v1.adjoint() * m.H * v1);
  const ComplexMatrix g11 = hermitian_part(v1.adjoint() * m.G * v1);
  Eigen::GeneralizedSelfAdjointEigenSolver<ComplexMatrix> pencil(h11, g11, Eigen::EigenvaluesOnly);
  out.pencil = std::max(0.0, pencil.eigenvalues()(0));
  out.bisection = detail::b_by_bisection(m, p.A);

  const double ref = std::max({out.pencil, out.bisection, 1e-12 * h_scale / (a_norm * a_norm)});
  if (std::abs(out.pencil - out.bisection) > 1e-8 * ref)
    fail(ErrorKind::MethodDisagreement, "pencil b = " + std::to_string(out.pencil) +
                                            ", bisection b = " + std::to_string(out.bisection));
  out.kind = BKind::Finite;
  out.value = out.pencil;
  return out;
}

// ---------------------------------------------------------------------------
// Predictions for b > 1

struct SectorPrediction {
  double omega_lemma = 0.0;      // pi/2 - arcsin((b-1)/b)
  double omega_corollary = 0.0;  // arcsin((b-1)/b)
  double M = 0.0;                // b/(b-1)
};

inline SectorPrediction predicted_sector(double b) {
  if (!(b > 1.0) || !std::isfinite(b)) fail(ErrorKind::OutOfDomain, "prediction needs finite b > 1");
  SectorPrediction s;
  s.omega_corollary = std::asin((b - 1.0) / b);
  s.omega_lemma = std::numbers::pi / 2 - s.omega_corollary;
  s.M = b / (b - 1.0);
  return s;
}

/// M_eps = M / (sin(eps) sqrt(M^2 - 1)), valid for 0 < eps < arcsin(1/M).
inline double sector_resolvent_constant(double M, double eps) {
  if (!(M > 1.0) || !std::isfinite(M)) fail(ErrorKind::OutOfDomain, "M must exceed 1");
  if (!(eps > 0.0) || !(eps < std::asin(1.0 / M)))
    fail(ErrorKind::OutOfDomain, "eps must lie in (0, arcsin(1/M))");
  return M / (std::sin(eps) * std::sqrt(M * M - 1.0));
}

/// Half-opening of the wedge on which the M_eps resolvent bound is claimed.
inline double sector_resolvent_wedge(double M, double eps) {
  return std::numbers::pi / 2 - std::asin(1.0 / M) + eps;
}

// ---------------------------------------------------------------------------
// Bound checks

struct BoundCheck {
  double param = 0.0;  // t or lambda
  double quantity = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool marginal = false;
};

struct SectorResolventSample {
  Complex mu{};
  double norm = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct RelativeBoundResult {
  bool pass = false;
  double measured_ratio = 0.0;  // sup ||Ax|| / ||Tx||, possibly +inf
};

inline std::vector<double> default_t_grid() { return log_grid(-3, 3); }

namespace detail {

inline Eigen::PartialPivLU<ComplexMatrix> invertible_lu(const ComplexMatrix& m, const ToleranceConfig& tol,
                                                        const char* what) {
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  const double rc = lu.rcond();
  if (!(rc > tol.rank_tol) || !std::isfinite(rc))
    fail(ErrorKind::Singular, std::string(what) + " is numerically singular (rcond " + std::to_string(rc) + ")");
  return lu;
}

/// A (tI + T)^{-1}.
inline ComplexMatrix perturbed_resolvent_product(const OperatorPair& p, double t, const ToleranceConfig& tol) {
  const ComplexMatrix shifted = t * identity(p.dim()) + p.T;
  const auto lu = invertible_lu(shifted.adjoint(), tol, "tI + T");
  return lu.solve(p.A.adjoint()).adjoint();
}

inline void require_b(double b) {
  if (!(b > 0.0) || !std::isfinite(b)) fail(ErrorKind::OutOfDomain, "b must be finite and positive");
}

}  // namespace detail

/// sup ||Ax|| / ||Tx|| over x outside ker T from the largest eigenvalue of
/// the pencil (A*A, T*T) restricted to (ker T)^perp; +inf when A does not
/// vanish on ker T.
inline RelativeBoundResult relative_bound_check(const OperatorPair& p, double b, const ToleranceConfig& tol = {}) {
  validate_pair(p);
  detail::require_b(b);
  Eigen::JacobiSVD<ComplexMatrix> svd(p.T, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol.rank_tol * sv(0)) ++rank;
  RelativeBoundResult r;
  const double scale = std::max({operator_norm(p.A), sv(0), std::numeric_limits<double>::min()});
  if (rank < p.dim()) {
    const ComplexMatrix v0 = svd.matrixV().rightCols(p.dim() - rank);
    if (operator_norm(p.A * v0) > tol.rank_tol * scale) {
      r.measured_ratio = std::numeric_limits<double>::infinity();
      r.pass = false;
      return r;
    }
  }
  if (rank == 0) {
    r.measured_ratio = 0.0;
  } else {
    const ComplexMatrix v1 = svd.matrixV().leftCols(rank);
    const Eigen::VectorXd inv_s = sv.head(rank).cwiseInverse();
    // Largest pencil eigenvalue equals ||A V1 S1^{-1}||^2.
    r.measured_ratio = operator_norm(p.A * v1 * inv_s.asDiagonal());
  }
  r.pass = compare_le(r.measured_ratio, 1.0 / b, tol.eig_tol / b).pass;
  return r;
}

/// ||A (t + T)^{-1}|| <= 1/b.
inline std::vector<BoundCheck> contraction_check(const OperatorPair& p, double b, const std::vector<double>& t_grid,
                                                 const ToleranceConfig& tol = {}) {
  validate_pair(p);
  detail::require_b(b);
  require_positive_grid(t_grid, "t grid");
  std::vector<BoundCheck> out;
  for (double t : t_grid) {
    BoundCheck c{t, operator_norm(detail::perturbed_resolvent_product(p, t, tol)), 1.0 / b};
    const Verdict v = compare_le(c.quantity, c.bound, tol.eig_tol * c.bound);
    c.pass = v.pass;
    c.marginal = v.marginal;
    out.push_back(c);
  }
  return out;
}

/// t ||(t + T + A)^{-1}|| <= M.
inline std::vector<BoundCheck> resolvent_uniform_bound(const OperatorPair& p, double M,
                                                       const std::vector<double>& t_grid,
                                                       const ToleranceConfig& tol = {}) {
  validate_pair(p);
  if (!(M > 1.0)) fail(ErrorKind::OutOfDomain, "M must exceed 1");
  require_positive_grid(t_grid, "t grid");
  const ComplexMatrix s = p.sum();
  std::vector<BoundCheck> out;
  for (double t : t_grid) {
    BoundCheck c{t, t * resolvent_norm(s, t, tol), M};
    const Verdict v = compare_le(c.quantity, M, tol.eig_tol * M);
    c.pass = v.pass;
    c.marginal = v.marginal;
    out.push_back(c);
  }
  return out;
}

/// Relative residual of t + T + A = [I + A(t+T)^{-1}](t + T).
inline double factorization_identity_check(const OperatorPair& p, double t, const ToleranceConfig& tol = {}) {
  validate_pair(p);
  if (!(t > 0.0)) fail(ErrorKind::InvalidArgument, "t must be positive");
  const Eigen::Index n = p.dim();
  const ComplexMatrix shifted = t * identity(n) + p.T;
  const ComplexMatrix k = detail::perturbed_resolvent_product(p, t, tol);
  const ComplexMatrix lhs = shifted + p.A;
  const ComplexMatrix rhs = (identity(n) + k) * shifted;
  return operator_norm(lhs - rhs) / matrix_scale(lhs);
}

inline constexpr double kFactorizationTolerance = 1e-12;

/// ||(I + A(t+T)^{-1})^{-1}|| <= b/(b-1). A singular I + A(t+T)^{-1} is
/// reported as a failed record with infinite norm.
inline std::vector<BoundCheck> neumann_inverse_bound_check(const OperatorPair& p, double b,
                                                           const std::vector<double>& t_grid,
                                                           const ToleranceConfig& tol = {}) {
  validate_pair(p);
  if (!(b > 1.0) || !std::isfinite(b)) fail(ErrorKind::OutOfDomain, "Neumann bound needs finite b > 1");
  require_positive_grid(t_grid, "t grid");
  const double bound = b / (b - 1.0);
  std::vector<BoundCheck> out;
  for (double t : t_grid) {
    const ComplexMatrix k = detail::perturbed_resolvent_product(p, t, tol);
    const Eigen::VectorXd s = singular_values(identity(p.dim()) + k);
    BoundCheck c{t, 0.0, bound};
    const double smin = s(s.size() - 1);
    if (smin <= tol.rank_tol * s(0)) {
      c.quantity = std::numeric_limits<double>::infinity();
    } else {
      c.quantity = 1.0 / smin;
      const Verdict v = compare_le(c.quantity, bound, tol.eig_tol * bound);
      c.pass = v.pass;
      c.marginal = v.marginal;
    }
    out.push_back(c);
  }
  return out;
}

/// One sector-resolvent sample: ||(mu + T + A)^{-1}|| <= M_eps / |mu|.
inline SectorResolventSample sector_resolvent_point(const ComplexMatrix& sum, double m_eps, Complex mu,
                                                    const ToleranceConfig& tol = {}) {
  SectorResolventSample s;
  s.mu = mu;
  s.norm = resolvent_norm(sum, mu, tol);
  s.bound = m_eps / std::abs(mu);
  s.pass = compare_le(s.norm, s.bound, tol.eig_tol * s.bound).pass;
  return s;
}

/// Samples mu with |mu| log-uniform in [1e-3, 1e3] * ||T + A|| and arg
/// uniform in |arg mu| <= pi/2 - arcsin(1/M) + eps.
inline std::vector<SectorResolventSample> sector_resolvent_bound(const OperatorPair& p, double M, double eps,
                                                                 int n_samples, std::uint64_t seed,
                                                                 const ToleranceConfig& tol = {}) {
  validate_pair(p);
  const double m_eps = sector_resolvent_constant(M, eps);
  if (n_samples < 1) fail(ErrorKind::InvalidArgument, "n_samples must be >= 1");
  const ComplexMatrix s = p.sum();
  const double scale = matrix_scale(s);
  const double wedge = sector_resolvent_wedge(M, eps);
  Rng rng(seed);
  std::vector<SectorResolventSample> out;
  out.reserve(static_cast<std::size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) {
    const double r = rng.log_uniform(1e-3 * scale, 1e3 * scale);
    const double phi = rng.uniform(-wedge, wedge);
    out.push_back(sector_resolvent_point(s, m_eps, std::polar(r, phi), tol));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Companion constants

/// Smallest a >= 0 making a quadratic inequality hold, for a fixed
/// coefficient on ||Tx||^2, with its eigenvalue certificate.
struct RelativeBoundConstants {
  double coefficient = 0.0;  // beta (Okazawa form) or b (relative-bound form)
  double minimal_a = 0.0;
  bool certified = false;
};

namespace detail {

// a = max(0, -lambda_min(P)); certified when P + aI >= 0 and, for a > 0,
// P + (a - 10 tol scale) I is not.
inline RelativeBoundConstants minimal_shift(const ComplexMatrix& psd_target, double coefficient,
                                            const ToleranceConfig& tol) {
  RelativeBoundConstants r;
  r.coefficient = coefficient;
  const double scale = matrix_scale(psd_target);
  const double lmin = hermitian_eigen(psd_target, false).eigenvalues()(0);
  r.minimal_a = std::max(0.0, -lmin);
  const Eigen::Index n = psd_target.rows();
  const double at = hermitian_eigen(psd_target + r.minimal_a * identity(n), false).eigenvalues()(0);
  bool ok = at >= -tol.eig_tol * scale;
  if (r.minimal_a > 0.0) {
    const double below = r.minimal_a - 10.0 * tol.eig_tol * scale;
    ok = ok && hermitian_eigen(psd_target + below * identity(n), false).eigenvalues()(0) < 0.0;
  }
  r.certified = ok;
  return r;
}

}  // namespace detail

/// Minimal a with Re<Tx, Ax> + a||x||^2 + beta||Tx||^2 >= 0.
inline RelativeBoundConstants okazawa_constants(const OperatorPair& p, double beta, const ToleranceConfig& tol = {}) {
  validate_pair(p);
  if (!(beta >= 0.0)) fail(ErrorKind::InvalidArgument, "beta must be non-negative");
  const ConditionMatrices m = condition_matrices(p);
  const ComplexMatrix target = hermitian_part(m.H + beta * (p.T.adjoint() * p.T));
  return detail::minimal_shift(target, beta, tol);
}

/// Minimal a with ||Ax||^2 <= a||x||^2 + b_rel||Tx||^2.
inline RelativeBoundConstants relative_bound_constants(const OperatorPair& p, double b_rel,
                                                       const ToleranceConfig& tol = {}) {
  validate_pair(p);
  if (!(b_rel >= 0.0)) fail(ErrorKind::InvalidArgument, "b_rel must be non-negative");
  const ComplexMatrix target = hermitian_part(b_rel * (p.T.adjoint() * p.T) - p.A.adjoint() * p.A);
  return detail::minimal_shift(target, b_rel, tol);
}

struct ProductAccretivity {
  double t = 0.0;
  double min_hermitian_eig = 0.0;
  bool pass = false;
};

/// A(t + T)^{-1} accretive for each t.
inline std::vector<ProductAccretivity> accretive_product_check(const OperatorPair& p,
                                                               const std::vector<double>& t_grid,
                                                               const ToleranceConfig& tol = {}) {
  validate_pair(p);
  require_positive_grid(t_grid, "t grid");
  std::vector<ProductAccretivity> out;
  for (double t : t_grid) {
    const ComplexMatrix k = detail::perturbed_resolvent_product(p, t, tol);
    ProductAccretivity r;
    r.t = t;
    r.min_hermitian_eig = min_eig_hermitian(hermitian_part(k), tol);
    r.pass = r.min_hermitian_eig >= -tol.eig_tol * matrix_scale(k);
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sector-claim audit

struct ClaimAuditRecord {
  SectorMeasurement measured;  // numerical-range sector of T + A
  double omega_lemma = 0.0;
  bool lemma_claim_holds = true;
  std::optional<Complex> violation_witness;
};

/// Observational: compares the measured sector of T + A against the
/// predicted half-angle and never throws on a violation.
inline ClaimAuditRecord audit_sector_claim(const OperatorPair& p, double b, const ToleranceConfig& tol = {},
                                           int n_angles = kDefaultAngles) {
  validate_pair(p);
  const SectorPrediction pred = predicted_sector(b);
  ClaimAuditRecord r;
  r.omega_lemma = pred.omega_lemma;
  r.measured = sector_half_angle(p.sum(), n_angles, tol);
  r.lemma_claim_holds = !r.measured.full_half_plane && r.measured.angle <= pred.omega_lemma + tol.angle_tol;
  if (!r.lemma_claim_holds) r.violation_witness = r.measured.witness;
  return r;
}

inline ClaimAuditRecord audit_sector_claim(const OperatorPair& p, const ToleranceConfig& tol = {}) {
  const OptimalConstant b = compute_b(p, tol);
  if (!b.sectorial()) fail(ErrorKind::OutOfDomain, "sector audit needs finite b > 1");
  return audit_sector_claim(p, b.value, tol);
}

}  // namespace accretive
