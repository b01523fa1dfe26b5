#pragma once

// Exponential Trotter-Kato product formula error
//
//     || (e^{-tB/n} e^{-tA/n})^n - e^{-t(A+B)} ||
//
// for self-adjoint A and accretive B, its adjoint-ordered twin, and a
// least-squares fit of the model L ln(n) / n^alpha to the sup-over-t curve.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "accretive/perturbation.hpp"
#include "accretive/semigroup.hpp"

namespace accretive {

struct HypothesisReport {
  bool A_selfadjoint = false;
  bool B_accretive = false;
  std::optional<OptimalConstant> b;
  bool b_gt_1 = false;
  double relative_bound_a = 0.0;  // 1/b
  std::optional<RelativeBoundResult> relative_bound;
  bool waived = false;
  std::string failing_clause;  // empty when all clauses hold
  std::vector<std::string> log;

  bool passed() const { return failing_clause.empty(); }
};

class HypothesisFailed : public LabError {
 public:
  explicit HypothesisFailed(HypothesisReport report)
      : LabError(ErrorKind::HypothesisFailed, "clause '" + report.failing_clause + "' does not hold"),
        report_(std::move(report)) {}
  const HypothesisReport& report() const noexcept { return report_; }

 private:
  HypothesisReport report_;
};

namespace detail {

inline HypothesisReport evaluate_hypotheses(const ComplexMatrix& a, const ComplexMatrix& b, const ToleranceConfig& tol) {
  validate_matrix(a, "A");
  validate_matrix(b, "B");
  require_same_dim(a, b);
  HypothesisReport r;
  r.A_selfadjoint = (a - a.adjoint()).norm() <= tol.eig_tol * std::max(a.norm(), 1e-300);
  r.B_accretive = is_accretive(b, tol);
  r.log.push_back("domain inclusion for fractional powers holds trivially: every domain is the whole space");
  r.log.push_back("alpha in (0, 1/2) is granted without the domain condition");
  if (!r.A_selfadjoint) {
    r.failing_clause = "A_selfadjoint";
    return r;
  }
  if (!r.B_accretive) {
    r.failing_clause = "B_accretive";
    return r;
  }
  const OperatorPair pair{hermitian_part(a), b, PairFamily::User, std::nullopt};
  r.b = compute_b(pair, tol);
  r.b_gt_1 = r.b->sectorial();
  if (r.b->finite() && r.b->value > 0.0) {
    r.relative_bound_a = 1.0 / r.b->value;
    r.relative_bound = relative_bound_check(pair, r.b->value, tol);
  } else if (r.b->kind == BKind::Infinite) {
    r.relative_bound_a = 0.0;
    r.b_gt_1 = true;
    r.log.push_back("B vanishes: the product formula is exact");
  }
  if (!r.b_gt_1) {
    r.failing_clause = "b_gt_1";
  } else if (r.relative_bound && !r.relative_bound->pass) {
    r.failing_clause = "relative_bound";
  }
  return r;
}

inline ComplexMatrix binary_power(ComplexMatrix base, long long n) {
  ComplexMatrix result = identity(base.rows());
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace detail

/// Self-adjoint A, accretive B, and Re<Ax, Bx> >= b ||Bx||^2 with b > 1
/// (hence ||Bx|| <= (1/b)||Ax||). Throws HypothesisFailed naming the first
/// clause that does not hold.
inline HypothesisReport check_thm_hypotheses(const ComplexMatrix& a, const ComplexMatrix& b,
                                             const ToleranceConfig& tol = {}) {
  HypothesisReport r = detail::evaluate_hypotheses(a, b, tol);
  if (!r.passed()) throw HypothesisFailed(std::move(r));
  return r;
}

inline void require_trotter_args(double t, long long n) {
  if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorKind::InvalidArgument, "t must be positive");
  if (n < 1) fail(ErrorKind::InvalidArgument, "n must be >= 1");
}

inline double trotter_error(const ComplexMatrix& a, const ComplexMatrix& b, double t, long long n) {
  validate_matrix(a, "A");
  validate_matrix(b, "B");
  require_same_dim(a, b);
  require_trotter_args(t, n);
  const double step = t / static_cast<double>(n);
  const ComplexMatrix factor = matrix_exp(-step * b) * matrix_exp(-step * a);
  return operator_norm(detail::binary_power(factor, n) - matrix_exp(-t * (a + b)));
}

/// Adjoint ordering: (e^{-tA*/n} e^{-tB*/n})^n against e^{-t(A+B)*}.
inline double adjoint_trotter_error(const ComplexMatrix& a, const ComplexMatrix& b, double t, long long n) {
  validate_matrix(a, "A");
  validate_matrix(b, "B");
  require_same_dim(a, b);
  require_trotter_args(t, n);
  const double step = t / static_cast<double>(n);
  const ComplexMatrix as = a.adjoint();
  const ComplexMatrix bs = b.adjoint();
  const ComplexMatrix factor = matrix_exp(-step * as) * matrix_exp(-step * bs);
  return operator_norm(detail::binary_power(factor, n) - matrix_exp(-t * (as + bs)));
}

struct RateFit {
  double L = 0.0;
  double alpha = 0.0;
  double residual = 0.0;  // RMS in log space

  double predict(double n) const { return L * std::log(n) / std::pow(n, alpha); }
};

/// Least squares for log(err) = log L + log ln n - alpha log n.
inline RateFit fit_rate(const std::vector<double>& n_values, const std::vector<double>& error_values) {
  if (n_values.size() != error_values.size())
    fail(ErrorKind::InvalidArgument, "n and error series differ in length");
  if (n_values.size() < 4) fail(ErrorKind::DegenerateData, "need at least 4 points");
  const std::size_t m = n_values.size();
  std::vector<double> x(m), y(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (!(n_values[i] >= 2.0)) fail(ErrorKind::DegenerateData, "n must be >= 2");
    if (!(error_values[i] > 0.0) || !std::isfinite(error_values[i]))
      fail(ErrorKind::DegenerateData, "errors must be positive and finite");
    x[i] = std::log(n_values[i]);
    y[i] = std::log(error_values[i]) - std::log(std::log(n_values[i]));
  }
  double xm = 0.0, ym = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    xm += x[i];
    ym += y[i];
  }
  xm /= static_cast<double>(m);
  ym /= static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxy += (x[i] - xm) * (y[i] - ym);
    sxx += (x[i] - xm) * (x[i] - xm);
  }
  if (!(sxx > 0.0)) fail(ErrorKind::DegenerateData, "all n values coincide");
  RateFit f;
  f.alpha = -sxy / sxx;
  const double log_l = ym + f.alpha * xm;
  f.L = std::exp(log_l);
  double ss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double r = y[i] - (log_l - f.alpha * x[i]);
    ss += r * r;
  }
  f.residual = std::sqrt(ss / static_cast<double>(m));
  return f;
}

struct TrotterExperiment {
  ComplexMatrix A;
  ComplexMatrix B;
  std::vector<double> t_grid;
  std::vector<long long> n_grid;
  std::vector<std::vector<double>> errors;          // [t][n]
  std::vector<std::vector<double>> adjoint_errors;  // [t][n]
  std::vector<double> sup_errors;                   // max over t, per n
  std::optional<RateFit> fit;
  std::string fit_skipped;  // reason when fit is absent
  bool alpha_flagged = false;
  HypothesisReport hypotheses;
};

inline std::vector<double> default_trotter_t_grid() { return {0.5, 1.0, 2.0, 4.0}; }

inline std::vector<long long> default_trotter_n_grid() {
  std::vector<long long> g;
  for (int k = 1; k <= 10; ++k) g.push_back(1LL << k);
  return g;
}

inline constexpr double kZeroErrorFloor = 1e-12;

/// Fills the (t, n) error tables and fits the sup-over-t curve. Without a
/// waiver a failing hypothesis throws HypothesisFailed.
inline TrotterExperiment run_experiment(const ComplexMatrix& a, const ComplexMatrix& b, const std::vector<double>& t_grid,
                                        const std::vector<long long>& n_grid, bool waiver = false,
                                        const ToleranceConfig& tol = {}) {
  if (t_grid.empty() || n_grid.empty()) fail(ErrorKind::InvalidArgument, "grids must be non-empty");
  TrotterExperiment ex;
  ex.hypotheses = detail::evaluate_hypotheses(a, b, tol);
  if (!ex.hypotheses.passed()) {
    if (!waiver) throw HypothesisFailed(ex.hypotheses);
    ex.hypotheses.waived = true;
  }
  ex.A = a;
  ex.B = b;
  ex.t_grid = t_grid;
  ex.n_grid = n_grid;
  ex.errors.assign(t_grid.size(), std::vector<double>(n_grid.size()));
  ex.adjoint_errors = ex.errors;
  ex.sup_errors.assign(n_grid.size(), 0.0);
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    for (std::size_t j = 0; j < n_grid.size(); ++j) {
      ex.errors[i][j] = trotter_error(a, b, t_grid[i], n_grid[j]);
      ex.adjoint_errors[i][j] = adjoint_trotter_error(a, b, t_grid[i], n_grid[j]);
      ex.sup_errors[j] = std::max(ex.sup_errors[j], ex.errors[i][j]);
    }
  }
  const double worst = *std::max_element(ex.sup_errors.begin(), ex.sup_errors.end());
  if (worst <= kZeroErrorFloor) {
    ex.fit_skipped = "degenerate: zero error";
    return ex;
  }
  std::vector<double> ns(n_grid.begin(), n_grid.end());
  try {
    ex.fit = fit_rate(ns, ex.sup_errors);
    ex.alpha_flagged = !(ex.fit->alpha > 0.0 && ex.fit->alpha <= 1.5);
  } catch (const LabError& e) {
    if (e.kind() != ErrorKind::DegenerateData) throw;
    ex.fit_skipped = e.what();
  }
  return ex;
}

struct TrotterPair {
  ComplexMatrix A;
  ComplexMatrix B;
};

/// Hermitian positive-definite A with spectrum in [0.5, 3] and
/// B = gamma (A + K), K skew-Hermitian with ||K|| = skew. gamma is halved
/// until the pair certifies b > 1.
inline TrotterPair generate_trotter_pair(Eigen::Index dim, double gamma, double skew, std::uint64_t seed) {
  if (dim < 1) fail(ErrorKind::InvalidArgument, "dim must be >= 1");
  if (!(gamma > 0.0)) fail(ErrorKind::InvalidArgument, "gamma must be positive");
  Rng rng(derive_seed(seed, 0x7e077e0ULL + static_cast<std::uint64_t>(dim)));
  const ComplexMatrix u = rng.unitary(dim);
  Eigen::VectorXd spec(dim);
  for (Eigen::Index j = 0; j < dim; ++j) spec(j) = rng.uniform(0.5, 3.0);
  TrotterPair p;
  p.A = hermitian_part(u * spec.cast<Complex>().asDiagonal() * u.adjoint());
  const ComplexMatrix y = rng.gaussian(dim, dim);
  ComplexMatrix k = (y - y.adjoint()) * 0.5;
  const double kn = operator_norm(k);
  if (kn > 0.0) k *= skew / kn;
  for (int attempt = 0; attempt < 60; ++attempt, gamma *= 0.5) {
    p.B = gamma * (p.A + k);
    const OptimalConstant b = compute_b({p.A, p.B, PairFamily::User, seed});
    if (b.kind == BKind::Finite && b.value > 1.0) return p;
  }
  fail(ErrorKind::GenerationFailed, "could not certify b > 1");
}

}  // namespace accretive
