#pragma once

// Dense complex linear-algebra kernel: Hermitian parts and eigenvalues,
// singular values, the matrix exponential, numerical-range support
// functions and resolvent norms.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "accretive/errors.hpp"

namespace accretive {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Numerical slack used across the library. Every tolerance is relative:
/// callers multiply by a matrix scale (usually the operator norm) so that
/// verdicts are invariant under T -> cT.
struct ToleranceConfig {
  double eig_tol = 1e-10;    // eigenvalue / inequality slack, relative
  double rank_tol = 1e-10;   // kernel detection via singular values, relative
  double angle_tol = 1e-8;   // radians

  void validate() const {
    if (!(eig_tol >= 0.0) || !(rank_tol >= 0.0) || !(angle_tol >= 0.0))
      fail(ErrorKind::InvalidArgument, "tolerances must be non-negative");
  }
};

/// Square, non-empty, finite. Thrown at every public entry point that takes
/// user-supplied matrices.
inline void validate_matrix(const ComplexMatrix& m, const char* what = "matrix") {
  if (m.rows() < 1 || m.cols() < 1) fail(ErrorKind::InvalidArgument, std::string(what) + " is empty");
  if (m.rows() != m.cols())
    fail(ErrorKind::NotSquare, std::string(what) + " is " + std::to_string(m.rows()) + "x" +
                                   std::to_string(m.cols()));
  if (!m.allFinite()) fail(ErrorKind::InvalidArgument, std::string(what) + " has non-finite entries");
}

inline void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorKind::DimensionMismatch, "dimensions " + std::to_string(a.rows()) + " and " +
                                           std::to_string(b.rows()) + " differ");
}

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

/// (T + T*)/2. Entry (i,j) and (j,i) are exact conjugates.
inline ComplexMatrix hermitian_part(const ComplexMatrix& t) { return (t + t.adjoint()) * 0.5; }

/// Singular values in descending order.
inline Eigen::VectorXd singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return {};
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

inline double operator_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

inline double min_singular_value(const ComplexMatrix& m) {
  const Eigen::VectorXd s = singular_values(m);
  return s(s.size() - 1);
}

/// Operator norm with the zero matrix mapped to 1; the reference scale for
/// relative tolerances.
inline double matrix_scale(const ComplexMatrix& m) {
  const double n = operator_norm(m);
  return n > 0.0 ? n : 1.0;
}

inline void require_hermitian(const ComplexMatrix& h, const ToleranceConfig& tol) {
  validate_matrix(h, "Hermitian input");
  // Frobenius norms on both sides keep this check free of an SVD.
  const double asym = (h - h.adjoint()).norm();
  if (asym > tol.eig_tol * std::max(h.norm(), std::numeric_limits<double>::min()))
    fail(ErrorKind::NotHermitian, "||H - H*||_F = " + std::to_string(asym));
}

inline Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_eigen(const ComplexMatrix& h,
                                                                     bool vectors = true) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(
      h, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
}

inline double min_eig_hermitian(const ComplexMatrix& h, const ToleranceConfig& tol = {}) {
  require_hermitian(h, tol);
  return hermitian_eigen(h, false).eigenvalues()(0);
}

inline double max_eig_hermitian(const ComplexMatrix& h, const ToleranceConfig& tol = {}) {
  require_hermitian(h, tol);
  const auto ev = hermitian_eigen(h, false).eigenvalues();
  return ev(ev.size() - 1);
}

namespace detail {

inline double norm1(const ComplexMatrix& m) { return m.cwiseAbs().colwise().sum().maxCoeff(); }

// Pade coefficients b_0..b_m of the diagonal [m/m] approximant to exp.
inline constexpr std::array<double, 4> kPade3{120.0, 60.0, 12.0, 1.0};
inline constexpr std::array<double, 6> kPade5{30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
inline constexpr std::array<double, 8> kPade7{17297280.0, 8648640.0, 1995840.0, 277200.0,
                                              25200.0,    1512.0,    56.0,      1.0};
inline constexpr std::array<double, 10> kPade9{17643225600.0, 8821612800.0, 2075673600.0,
                                               302702400.0,   30270240.0,   2162160.0,
                                               110880.0,      3960.0,       90.0,
                                               1.0};
inline constexpr std::array<double, 14> kPade13{
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

// 1-norm thresholds below which degree m reaches unit roundoff without scaling.
inline constexpr double kTheta3 = 1.495585217958292e-2;
inline constexpr double kTheta5 = 2.539398330063230e-1;
inline constexpr double kTheta7 = 9.504178996162932e-1;
inline constexpr double kTheta9 = 2.097847961257068e0;
inline constexpr double kTheta13 = 5.371920351148152e0;

template <std::size_t N>
void pade_low(const ComplexMatrix& a, const std::array<double, N>& b, ComplexMatrix& u,
              ComplexMatrix& v) {
  const Eigen::Index n = a.rows();
  const ComplexMatrix a2 = a * a;
  ComplexMatrix odd = b[1] * identity(n);
  ComplexMatrix even = b[0] * identity(n);
  ComplexMatrix power = identity(n);
  for (std::size_t k = 2; k < N; k += 2) {
    power = power * a2;
    even += b[k] * power;
    if (k + 1 < N) odd += b[k + 1] * power;
  }
  u = a * odd;
  v = even;
}

inline void pade13(const ComplexMatrix& a, ComplexMatrix& u, ComplexMatrix& v) {
  const auto& b = kPade13;
  const Eigen::Index n = a.rows();
  const ComplexMatrix id = identity(n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix inner_u = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  u = a * (inner_u + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
  v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
}

}  // namespace detail

/// e^T by scaling and squaring with a diagonal Pade approximant of degree
/// up to 13, degree and scaling chosen from the 1-norm.
inline ComplexMatrix matrix_exp(const ComplexMatrix& t) {
  validate_matrix(t, "exponent");
  const double norm = detail::norm1(t);
  ComplexMatrix u, v;
  int squarings = 0;
  if (norm <= detail::kTheta3) {
    detail::pade_low(t, detail::kPade3, u, v);
  } else if (norm <= detail::kTheta5) {
    detail::pade_low(t, detail::kPade5, u, v);
  } else if (norm <= detail::kTheta7) {
    detail::pade_low(t, detail::kPade7, u, v);
  } else if (norm <= detail::kTheta9) {
    detail::pade_low(t, detail::kPade9, u, v);
  } else {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / detail::kTheta13))));
    if (squarings > 1000) fail(ErrorKind::Overflow, "exponent norm " + std::to_string(norm));
    detail::pade13(std::ldexp(1.0, -squarings) * t, u, v);
  }
  ComplexMatrix result = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) result = result * result;
  if (!result.allFinite()) fail(ErrorKind::Overflow, "matrix exponential is not representable");
  return result;
}

struct SupportPoint {
  double value = 0.0;        // support function h(phi)
  ComplexVector witness;     // unit maximizer of Re(e^{i phi} x*Tx)
  Complex boundary_point{};  // x*Tx, a point on the boundary of the numerical range
};

/// Support function of the numerical range in direction phi: the top
/// eigenpair of the Hermitian part of e^{i phi} T.
inline SupportPoint numerical_range_support(const ComplexMatrix& t, double phi) {
  validate_matrix(t);
  const ComplexMatrix h = hermitian_part(std::polar(1.0, phi) * t);
  const auto eig = hermitian_eigen(h);
  const Eigen::Index top = h.rows() - 1;
  SupportPoint out;
  out.value = eig.eigenvalues()(top);
  out.witness = eig.eigenvectors().col(top);
  out.boundary_point = out.witness.dot(t * out.witness);  // dot conjugates the left operand
  return out;
}

/// Largest |arg z| over sampled numerical-range boundary points, or the
/// full-half-plane sentinel when some boundary point has negative real part.
struct SectorMeasurement {
  bool full_half_plane = false;
  double angle = 0.0;
  Complex witness{};
  bool has_witness = false;
};

inline constexpr int kDefaultAngles = 720;

inline SectorMeasurement sector_half_angle(const ComplexMatrix& t, int n_angles = kDefaultAngles,
                                           const ToleranceConfig& tol = {}) {
  validate_matrix(t);
  if (n_angles < 8) fail(ErrorKind::InvalidArgument, "n_angles must be >= 8");
  const double scale = matrix_scale(t);
  const double tiny = tol.rank_tol * scale;
  const double neg_slack = tol.eig_tol * scale;

  SectorMeasurement out;
  auto consider = [&](const Complex& z) {
    if (out.full_half_plane) return;
    if (z.real() < -neg_slack) {
      out.full_half_plane = true;
      out.angle = std::numbers::pi / 2;
      out.witness = z;
      out.has_witness = true;
      return;
    }
    if (std::abs(z) < tiny) return;
    const double a = std::abs(std::arg(z));
    if (!out.has_witness || a > out.angle) {
      out.angle = a;
      out.witness = z;
      out.has_witness = true;
    }
  };

  const double step = 2.0 * std::numbers::pi / n_angles;
  int best = -1;
  double best_angle = -1.0;
  for (int k = 0; k < n_angles; ++k) {
    const Complex z = numerical_range_support(t, -std::numbers::pi + step * k).boundary_point;
    consider(z);
    if (out.full_half_plane) return out;
    if (std::abs(z) >= tiny && std::abs(std::arg(z)) > best_angle) {
      best_angle = std::abs(std::arg(z));
      best = k;
    }
  }
  // Local resampling around the best grid direction; every sample is a true
  // point of the numerical range so this can only tighten from below.
  if (best >= 0) {
    constexpr int kRefine = 32;
    const double lo = -std::numbers::pi + step * (best - 1);
    for (int k = 0; k <= kRefine; ++k) {
      consider(numerical_range_support(t, lo + 2.0 * step * k / kRefine).boundary_point);
      if (out.full_half_plane) return out;
    }
  }
  return out;
}

/// 1 / sigma_min(lambda I + T).
inline double resolvent_norm(const ComplexMatrix& t, Complex lambda, const ToleranceConfig& tol = {}) {
  validate_matrix(t);
  const ComplexMatrix shifted = lambda * identity(t.rows()) + t;
  const Eigen::VectorXd s = singular_values(shifted);
  const double smin = s(s.size() - 1);
  if (smin < tol.rank_tol * s(0) || smin == 0.0)
    fail(ErrorKind::Singular, "lambda I + T is numerically singular (sigma_min = " +
                                  std::to_string(smin) + ")");
  return 1.0 / smin;
}

/// Outcome of comparing a computed quantity against a claimed upper bound
/// with an absolute slack.
struct Verdict {
  bool pass = false;
  bool marginal = false;
};

inline Verdict compare_le(double quantity, double bound, double slack) {
  Verdict v;
  v.pass = quantity <= bound + slack;
  v.marginal = v.pass && quantity > bound - slack;
  return v;
}

inline Verdict compare_ge(double quantity, double bound, double slack) {
  return compare_le(-quantity, -bound, slack);
}

inline std::vector<double> log_grid(int lo_exp, int hi_exp) {
  std::vector<double> g;
  for (int k = lo_exp; k <= hi_exp; ++k) g.push_back(std::pow(10.0, k));
  return g;
}

}  // namespace accretive
