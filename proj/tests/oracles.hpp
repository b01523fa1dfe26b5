#pragma once

// Independent reference computations used only by the tests. None of these
// call into the library routines they are compared against.

#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline Vector random_unit(std::mt19937_64& gen, Eigen::Index n) {
  std::normal_distribution<double> nd;
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = {nd(gen), nd(gen)};
  return x / x.norm();
}

inline Matrix diag(std::initializer_list<Complex> d) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (Complex z : d) m(i, i) = z, ++i;
  return m;
}

namespace detail {
// x*Mx for Hermitian M in split real/imaginary storage; plain real arithmetic
// keeps the hot loop free of the checked complex multiply.
struct HermitianForm {
  int n = 0;
  std::vector<double> re, im;
  explicit HermitianForm(const Matrix& m) : n(static_cast<int>(m.rows())), re(n * n), im(n * n) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) re[i * n + j] = m(i, j).real(), im[i * n + j] = m(i, j).imag();
  }
  double operator()(const double* xr, const double* xi) const {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      double wr = 0.0, wi = 0.0;
      for (int j = 0; j < n; ++j) {
        wr += re[i * n + j] * xr[j] - im[i * n + j] * xi[j];
        wi += re[i * n + j] * xi[j] + im[i * n + j] * xr[j];
      }
      acc += xr[i] * wr + xi[i] * wi;
    }
    return acc;
  }
};
}  // namespace detail

/// min over sampled x of Re<Tx, Ax> / ||Ax||^2, i.e. the largest c the
/// sampled vectors allow. Even samples are random directions; odd samples
/// perturb the best vector so far with a shrinking radius, a cheap local
/// search that closes most of the gap of pure sampling.
inline double b_by_rayleigh_sampling(const Matrix& t, const Matrix& a, int samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  // cube draws: not uniform on the sphere but full support, and far cheaper than Gaussians
  auto ud = [&gen] { return static_cast<double>(gen() >> 11) * 0x1.0p-52 - 1.0; };
  const int n = static_cast<int>(t.rows());
  // both forms are homogeneous of degree 2, so x need not be normalized
  const detail::HermitianForm g_form(a.adjoint() * a);
  const detail::HermitianForm h_form(0.5 * (a.adjoint() * t + t.adjoint() * a));
  std::vector<double> xr(n), xi(n), br(n), bi(n);
  {
    const Vector b0 = random_unit(gen, n);
    for (int i = 0; i < n; ++i) br[i] = b0(i).real(), bi[i] = b0(i).imag();
  }
  auto norm = [n](const std::vector<double>& r, const std::vector<double>& i) {
    double s = 0.0;
    for (int k = 0; k < n; ++k) s += r[k] * r[k] + i[k] * i[k];
    return std::sqrt(s);
  };
  double best = std::numeric_limits<double>::infinity();
  const double shrink = std::pow(1e-6, 2.0 / samples);
  double radius = 1.0;
  for (int k = 0; k < samples; ++k) {
    for (int i = 0; i < n; ++i) xr[i] = ud(), xi[i] = ud();
    if (k % 2 == 1) {
      const double s = radius / norm(xr, xi);
      for (int i = 0; i < n; ++i) xr[i] = br[i] + s * xr[i], xi[i] = bi[i] + s * xi[i];
      radius *= shrink;
    }
    const double g = g_form(xr.data(), xi.data());
    const double len = norm(xr, xi);
    if (g <= 1e-300 * len * len) continue;
    const double q = h_form(xr.data(), xi.data()) / g;
    if (q < best) {
      best = q;
      const double s = 1.0 / len;
      for (int i = 0; i < n; ++i) br[i] = s * xr[i], bi[i] = s * xi[i];
    }
  }
  return best;
}

/// Closed form for commuting diagonal pairs: min_j Re(conj(a_j) t_j) / |a_j|^2.
inline double b_diagonal(const Vector& t, const Vector& a) {
  double b = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < t.size(); ++j)
    if (std::abs(a(j)) > 0.0) b = std::min(b, (std::conj(a(j)) * t(j)).real() / std::norm(a(j)));
  return b;
}

/// max Re(e^{i phi} x*Tx) over sampled unit vectors.
inline double support_by_sampling(const Matrix& t, double phi, int samples, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  const Complex rot = std::polar(1.0, phi);
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    const Vector x = random_unit(gen, t.rows());
    best = std::max(best, (rot * x.dot(t * x)).real());
  }
  return best;
}

/// e^M by Taylor series after scaling by 2^-s, with squaring.
inline Matrix exp_taylor(const Matrix& m) {
  const double norm = m.cwiseAbs().colwise().sum().maxCoeff();
  int s = 0;
  while (std::ldexp(norm, -s) > 0.25) ++s;
  const Matrix x = std::ldexp(1.0, -s) * m;
  Matrix term = Matrix::Identity(m.rows(), m.cols());
  Matrix sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < s; ++k) sum = sum * sum;
  return sum;
}

inline double opnorm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace oracle
