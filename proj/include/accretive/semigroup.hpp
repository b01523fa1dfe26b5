#pragma once

// Contraction semigroups e^{-tS}, their holomorphic extension e^{-zS} on a
// sector, and principal fractional powers T^alpha with the sector law
// |arg W(T^alpha)| <= alpha pi / 2 for accretive T.

#include <algorithm>
#include <limits>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "accretive/accretivity.hpp"

namespace accretive {

struct SemigroupProbe {
  std::vector<double> t_grid;
  std::vector<double> angle_grid;   // radians
  std::vector<double> radius_grid;

  void validate() const {
    for (const auto* g : {&t_grid, &angle_grid, &radius_grid}) {
      if (g->empty()) fail(ErrorKind::InvalidArgument, "probe grids must be non-empty");
      if (!std::is_sorted(g->begin(), g->end())) fail(ErrorKind::InvalidArgument, "probe grids must be sorted");
    }
  }
};

/// t in {10^-3..10^3}, |z| in {10^-2..10^2}, 17 angles spanning the sector
/// |phi| <= omega - angle_tol.
inline SemigroupProbe default_probe(double omega = std::numbers::pi / 4, const ToleranceConfig& tol = {},
                                    int n_angles = 17) {
  SemigroupProbe p;
  p.t_grid = log_grid(-3, 3);
  p.radius_grid = log_grid(-2, 2);
  const double edge = std::max(0.0, omega - tol.angle_tol);
  for (int k = 0; k < n_angles; ++k) p.angle_grid.push_back(-edge + 2.0 * edge * k / (n_angles - 1));
  return p;
}

struct SemigroupSample {
  double t = 0.0;
  double norm = 0.0;
  bool pass = false;
};

struct HolomorphicSample {
  Complex z{};
  double norm = 0.0;
  bool pass = false;
};

/// ||e^{-tS}|| <= 1 on the probe's t grid. Overflow propagates.
inline std::vector<SemigroupSample> semigroup_contraction_check(const ComplexMatrix& s, const SemigroupProbe& probe,
                                                                const ToleranceConfig& tol = {}) {
  validate_matrix(s);
  probe.validate();
  std::vector<SemigroupSample> out;
  for (double t : probe.t_grid) {
    SemigroupSample r;
    r.t = t;
    r.norm = operator_norm(matrix_exp(-t * s));
    r.pass = r.norm <= 1.0 + tol.eig_tol;
    out.push_back(r);
  }
  return out;
}

/// ||e^{-zS}|| <= 1 for z = r e^{i phi}, |phi| <= omega - angle_tol. Audit
/// semantics: failing samples are recorded, never raised; an overflowing
/// exponential is recorded as an infinite norm.
inline std::vector<HolomorphicSample> holomorphic_contraction_check(const ComplexMatrix& s, double omega,
                                                                    const SemigroupProbe& probe,
                                                                    const ToleranceConfig& tol = {}) {
  validate_matrix(s);
  probe.validate();
  if (!(omega > 0.0) || !(omega < std::numbers::pi / 2))
    fail(ErrorKind::OutOfDomain, "omega must lie in (0, pi/2)");
  std::vector<HolomorphicSample> out;
  const double edge = omega - tol.angle_tol;
  for (double r : probe.radius_grid) {
    for (double phi : probe.angle_grid) {
      if (std::abs(phi) > edge) continue;
      HolomorphicSample h;
      h.z = std::polar(r, phi);
      try {
        h.norm = operator_norm(matrix_exp(-h.z * s));
      } catch (const LabError& e) {
        if (e.kind() != ErrorKind::Overflow) throw;
        h.norm = std::numeric_limits<double>::infinity();
      }
      h.pass = h.norm <= 1.0 + tol.eig_tol;
      out.push_back(h);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fractional powers

enum class PowerMethod { Spectral, Integral };

inline std::string_view to_string(PowerMethod m) { return m == PowerMethod::Spectral ? "spectral" : "integral"; }

struct FractionalSectorCheck {
  double measured = 0.0;
  double bound = 0.0;  // alpha * pi / 2
  bool pass = false;
  bool marginal = false;
};

struct FractionalPowerResult {
  double alpha = 1.0;
  ComplexMatrix T_alpha;
  PowerMethod method = PowerMethod::Spectral;
  double shift = 0.0;  // regularization applied to a (near) singular T, 0 if none
  std::vector<std::string> warnings;
  std::optional<FractionalSectorCheck> sector_check;
};

namespace detail {

/// Principal square root of an upper-triangular matrix, column by column.
inline ComplexMatrix sqrt_upper_triangular(const ComplexMatrix& r) {
  const Eigen::Index n = r.rows();
  ComplexMatrix s = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    s(j, j) = std::sqrt(r(j, j));
    for (Eigen::Index i = j - 1; i >= 0; --i) {
      Complex acc = r(i, j);
      for (Eigen::Index k = i + 1; k < j; ++k) acc -= s(i, k) * s(k, j);
      s(i, j) = acc / (s(i, i) + s(j, j));
    }
  }
  return s;
}

// Continued-fraction [m/m] Pade approximant of (I - X)^p for triangular X,
// evaluated bottom-up.
inline ComplexMatrix pade_power(const ComplexMatrix& x, double p, int degree) {
  const Eigen::Index n = x.rows();
  auto coeff = [p](int i) {
    if (i == 1) return -p;
    const int j = i / 2;
    return (i % 2 == 0) ? (p - j) / (2.0 * (2 * j - 1)) : (-p - j) / (2.0 * (2 * j + 1));
  };
  ComplexMatrix res = coeff(2 * degree) * x;
  for (int i = 2 * degree - 1; i >= 1; --i) {
    const ComplexMatrix lhs = identity(n) + res;
    res = lhs.triangularView<Eigen::Upper>().solve(coeff(i) * x);
  }
  return res + identity(n);
}

inline constexpr int kPowerPadeDegree = 7;
inline constexpr double kPowerPadeTheta = 2.789358995219730e-1;

/// R^alpha for upper-triangular R: repeated square roots until R is close
/// to I, Pade for the residual power, then squaring back with the diagonal
/// reset to exact scalar powers at every stage.
inline ComplexMatrix power_upper_triangular(const ComplexMatrix& r, double alpha) {
  const Eigen::Index n = r.rows();
  ComplexMatrix x = r;
  int roots = 0;
  while (norm1(x - identity(n)) > kPowerPadeTheta && roots < 64) {
    x = sqrt_upper_triangular(x);
    ++roots;
  }
  ComplexMatrix y = pade_power(identity(n) - x, alpha, kPowerPadeDegree);
  y = y.triangularView<Eigen::Upper>();
  auto reset_diagonal = [&](int level) {
    const double exponent = std::ldexp(alpha, -level);
    for (Eigen::Index i = 0; i < n; ++i) y(i, i) = std::exp(exponent * std::log(r(i, i)));
  };
  reset_diagonal(roots);
  for (int level = roots - 1; level >= 0; --level) {
    y = (y.triangularView<Eigen::Upper>() * y).eval();
    reset_diagonal(level);
  }
  return y;
}

// Gauss-Legendre, 8 points on [-1, 1].
inline constexpr std::array<double, 4> kGaussNodes{0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                                   0.9602898564975363};
inline constexpr std::array<double, 4> kGaussWeights{0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                                     0.1012285362903763};

// Balakrishnan: T^a = sin(a pi)/pi * int_R e^{a u} T (e^u + T)^{-1} du,
// composite Gauss on [lo, hi] with `panels` panels.
inline ComplexMatrix balakrishnan_sum(const ComplexMatrix& t, double alpha, double lo, double hi, int panels) {
  const Eigen::Index n = t.rows();
  const double h = (hi - lo) / panels;
  ComplexMatrix acc = ComplexMatrix::Zero(n, n);
  auto add = [&](double u, double w) {
    const double s = std::exp(u);
    const ComplexMatrix shifted = s * identity(n) + t;
    acc += (w * std::exp(alpha * u)) * shifted.partialPivLu().solve(t);
  };
  for (int k = 0; k < panels; ++k) {
    const double mid = lo + (k + 0.5) * h;
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
      const double off = 0.5 * h * kGaussNodes[q];
      add(mid - off, 0.5 * h * kGaussWeights[q]);
      add(mid + off, 0.5 * h * kGaussWeights[q]);
    }
  }
  return acc * (std::sin(alpha * std::numbers::pi) / std::numbers::pi);
}

inline ComplexMatrix balakrishnan_power(const ComplexMatrix& t, double alpha) {
  // Tails beyond the window are bounded by ||T||^alpha e^{-37} for accretive T.
  const double centre = std::log(matrix_scale(t));
  const double lo = centre - (37.0 + std::log(2.0 / alpha)) / alpha;
  const double hi = centre + (37.0 + std::log(1.0 / (1.0 - alpha))) / (1.0 - alpha);
  int panels = static_cast<int>(std::ceil(hi - lo));
  ComplexMatrix prev = balakrishnan_sum(t, alpha, lo, hi, panels);
  for (int level = 0; level < 6; ++level) {
    panels *= 2;
    ComplexMatrix next = balakrishnan_sum(t, alpha, lo, hi, panels);
    const double change = (next - prev).norm();
    if (change < 1e-8 * next.norm()) return next;
    prev = std::move(next);
  }
  fail(ErrorKind::QuadratureNotConverged, "Balakrishnan quadrature did not settle to 1e-8");
}

}  // namespace detail

/// Principal fractional power T^alpha, alpha in (0, 1].
inline FractionalPowerResult fractional_power(const ComplexMatrix& t, double alpha,
                                              PowerMethod method = PowerMethod::Spectral,
                                              const ToleranceConfig& tol = {}) {
  validate_matrix(t);
  if (!(alpha > 0.0) || alpha > 1.0) fail(ErrorKind::OutOfDomain, "alpha must lie in (0, 1]");
  FractionalPowerResult res;
  res.alpha = alpha;
  res.method = method;
  if (alpha == 1.0) {
    res.T_alpha = t;
    return res;
  }
  const double scale = matrix_scale(t);
  Eigen::ComplexSchur<ComplexMatrix> schur(t);
  const ComplexMatrix& tri = schur.matrixT();
  bool near_zero = false;
  for (Eigen::Index i = 0; i < tri.rows(); ++i) {
    const Complex lam = tri(i, i);
    if (std::abs(lam) <= tol.rank_tol * scale) {
      near_zero = true;
    } else if (lam.real() < 0.0 && std::abs(lam.imag()) <= tol.eig_tol * scale) {
      fail(ErrorKind::SpectrumOnCut, "eigenvalue " + std::to_string(lam.real()) + " on the negative real axis");
    }
  }
  ComplexMatrix work = t;
  if (near_zero) {
    res.shift = 10.0 * tol.rank_tol * scale;
    res.warnings.push_back("eigenvalue within rank_tol of 0: shifted by " + std::to_string(res.shift));
    work += res.shift * identity(t.rows());
  }
  if (method == PowerMethod::Spectral) {
    Eigen::ComplexSchur<ComplexMatrix> s2(work);
    const ComplexMatrix& q = s2.matrixU();
    const ComplexMatrix r = s2.matrixT().triangularView<Eigen::Upper>();
    const ComplexMatrix p = (alpha == 0.5) ? detail::sqrt_upper_triangular(r) : detail::power_upper_triangular(r, alpha);
    res.T_alpha = q * p * q.adjoint();
  } else {
    res.T_alpha = detail::balakrishnan_power(work, alpha);
  }
  return res;
}

/// Numerical-range sector of T^alpha against alpha pi / 2. Hard check.
inline FractionalSectorCheck fractional_sector_check(const ComplexMatrix& t, double alpha, const ToleranceConfig& tol = {},
                                                     int n_angles = kDefaultAngles) {
  if (!is_accretive(t, tol)) fail(ErrorKind::OutOfDomain, "fractional sector law needs accretive T");
  const FractionalPowerResult p = fractional_power(t, alpha, PowerMethod::Spectral, tol);
  const SectorMeasurement m = sector_half_angle(p.T_alpha, n_angles, tol);
  FractionalSectorCheck c;
  c.bound = alpha * std::numbers::pi / 2;
  c.measured = m.full_half_plane ? std::abs(std::arg(m.witness)) : m.angle;
  const Verdict v = compare_le(c.measured, c.bound, tol.angle_tol);
  c.pass = v.pass;
  c.marginal = v.marginal;
  return c;
}

}  // namespace accretive
