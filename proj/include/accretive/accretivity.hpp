#pragma once

// Accretivity certificates for a single matrix: the Hermitian-part test,
// resolvent and lower bounds on a lambda grid, and rotated-sector tests.
// In finite dimension every accretive matrix is m-accretive, so the resolvent
// bound is checked rather than assumed.

#include <cmath>
#include <numbers>
#include <vector>

#include "accretive/numerics.hpp"

namespace accretive {

struct ResolventCheck {
  double lambda = 0.0;
  double norm = 0.0;
  double bound = 0.0;  // always 1/lambda
  bool pass = false;
  bool marginal = false;
};

struct LowerBoundCheck {
  double lambda = 0.0;
  double sigma_min = 0.0;
  bool pass = false;
  bool marginal = false;
};

struct AccretivityReport {
  double min_hermitian_eig = 0.0;
  bool is_accretive = false;
  SectorMeasurement sector;
  std::vector<ResolventCheck> resolvent_checks;
  std::vector<LowerBoundCheck> lower_bound_checks;
};

inline std::vector<double> default_lambda_grid() { return log_grid(-3, 3); }

inline bool is_accretive(const ComplexMatrix& t, const ToleranceConfig& tol = {}) {
  validate_matrix(t);
  return min_eig_hermitian(hermitian_part(t), tol) >= -tol.eig_tol * matrix_scale(t);
}

inline void require_positive_grid(const std::vector<double>& grid, const char* what) {
  for (double v : grid)
    if (!(v > 0.0) || !std::isfinite(v)) fail(ErrorKind::InvalidArgument, std::string(what) + " must be positive");
}

/// ||(lambda + T)^{-1}|| <= 1/lambda for each lambda. Singular propagates.
inline std::vector<ResolventCheck> check_resolvent_bound(const ComplexMatrix& t,
                                                         const std::vector<double>& lambda_grid,
                                                         const ToleranceConfig& tol = {}) {
  validate_matrix(t);
  require_positive_grid(lambda_grid, "lambda grid");
  std::vector<ResolventCheck> out;
  out.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    ResolventCheck c;
    c.lambda = lambda;
    c.norm = resolvent_norm(t, lambda, tol);
    c.bound = 1.0 / lambda;
    const Verdict v = compare_le(c.norm, c.bound, tol.eig_tol * c.bound);
    c.pass = v.pass;
    c.marginal = v.marginal;
    out.push_back(c);
  }
  return out;
}

/// ||(lambda + T)x|| >= lambda ||x||, i.e. sigma_min(lambda I + T) >= lambda.
inline std::vector<LowerBoundCheck> check_lower_bound(const ComplexMatrix& t,
                                                      const std::vector<double>& lambda_grid,
                                                      const ToleranceConfig& tol = {}) {
  validate_matrix(t);
  require_positive_grid(lambda_grid, "lambda grid");
  const double tnorm = operator_norm(t);
  std::vector<LowerBoundCheck> out;
  out.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) {
    LowerBoundCheck c;
    c.lambda = lambda;
    c.sigma_min = min_singular_value(lambda * identity(t.rows()) + t);
    const Verdict v = compare_ge(c.sigma_min, lambda, tol.eig_tol * (lambda + tnorm));
    c.pass = v.pass;
    c.marginal = v.marginal;
    out.push_back(c);
  }
  return out;
}

/// e^{+-i theta} T accretive with theta = pi/2 - omega, i.e. the numerical
/// range lies in the closed sector |arg z| <= omega.
inline bool is_m_omega_accretive(const ComplexMatrix& t, double omega, const ToleranceConfig& tol = {}) {
  validate_matrix(t);
  if (!(omega > 0.0) || omega > std::numbers::pi / 2)
    fail(ErrorKind::OutOfDomain, "omega must lie in (0, pi/2]");
  const double theta = std::numbers::pi / 2 - omega;
  return is_accretive(std::polar(1.0, theta) * t, tol) && is_accretive(std::polar(1.0, -theta) * t, tol);
}

inline AccretivityReport certify_accretivity(const ComplexMatrix& t, const ToleranceConfig& tol = {},
                                             const std::vector<double>& lambda_grid = default_lambda_grid(),
                                             int n_angles = kDefaultAngles) {
  validate_matrix(t);
  AccretivityReport r;
  r.min_hermitian_eig = min_eig_hermitian(hermitian_part(t), tol);
  r.is_accretive = r.min_hermitian_eig >= -tol.eig_tol * matrix_scale(t);
  r.sector = sector_half_angle(t, n_angles, tol);
  r.lower_bound_checks = check_lower_bound(t, lambda_grid, tol);
  if (r.is_accretive) r.resolvent_checks = check_resolvent_bound(t, lambda_grid, tol);
  return r;
}

}  // namespace accretive
