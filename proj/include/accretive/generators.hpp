#pragma once

// Seeded instance families for the perturbation hypothesis. Every family is
// deterministic in (family, dim, params, seed).

#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "accretive/perturbation.hpp"

namespace accretive {

struct GeneratorParams {
  double target_b = 2.0;   // diagonal / rotated: exact optimal constant
  double gamma = 0.5;      // scalar-multiple: A = gamma T, so b = 1/gamma
  double max_arg = 1.2;    // |arg t_j| bound for diagonal spectra, < pi/2
  double skew_scale = 1.0; // scalar-multiple / adversarial: size of the skew part
  int retries = 1000;      // adversarial rejection budget

  static GeneratorParams from_map(const std::map<std::string, double>& kv) {
    GeneratorParams p;
    for (const auto& [key, value] : kv) {
      if (key == "b") p.target_b = value;
      else if (key == "gamma") p.gamma = value;
      else if (key == "max_arg") p.max_arg = value;
      else if (key == "skew") p.skew_scale = value;
      else if (key == "retries") p.retries = static_cast<int>(value);
      else fail(ErrorKind::InvalidArgument, "unknown generator parameter '" + key + "'");
    }
    return p;
  }
};

namespace detail {

inline ComplexMatrix random_psd(Eigen::Index n, Rng& rng) {
  const ComplexMatrix x = rng.gaussian(n, n);
  return hermitian_part(x * x.adjoint() / static_cast<double>(n));
}

inline ComplexMatrix random_skew(Eigen::Index n, Rng& rng) {
  const ComplexMatrix y = rng.gaussian(n, n);
  return (y - y.adjoint()) * 0.5;
}

inline ComplexMatrix random_accretive(Eigen::Index n, double skew_scale, Rng& rng) {
  return random_psd(n, rng) + skew_scale * random_skew(n, rng);
}

// Diagonal pair with exact b. With a_j = rho_j e^{i psi_j} t_j the ratio
// Re(conj(a_j) t_j)/|a_j|^2 equals cos(psi_j)/rho_j; we pick the ratios
// c_j >= b with one equal to b and solve for rho_j.
inline OperatorPair diagonal_pair(Eigen::Index n, const GeneratorParams& params, Rng& rng) {
  const double b = params.target_b;
  if (!(b > 0.0) || !std::isfinite(b)) fail(ErrorKind::InvalidArgument, "diagonal family needs finite b > 0");
  if (!(params.max_arg >= 0.0) || !(params.max_arg < std::numbers::pi / 2))
    fail(ErrorKind::InvalidArgument, "max_arg must lie in [0, pi/2)");
  constexpr double kInset = 0.8;
  const std::size_t critical = rng.index(static_cast<std::size_t>(n));
  ComplexVector t(n), a(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double theta = rng.uniform(-params.max_arg, params.max_arg);
    t(j) = std::polar(rng.log_uniform(0.5, 2.0), theta);
    const double lo = kInset * std::max(-std::numbers::pi / 2, -std::numbers::pi / 2 - theta);
    const double hi = kInset * std::min(std::numbers::pi / 2, std::numbers::pi / 2 - theta);
    const double psi = rng.uniform(lo, hi);
    const double ratio = static_cast<std::size_t>(j) == critical ? b : b * (1.0 + rng.uniform());
    a(j) = std::polar(std::cos(psi) / ratio, psi) * t(j);
  }
  OperatorPair p;
  p.T = t.asDiagonal();
  p.A = a.asDiagonal();
  return p;
}

}  // namespace detail

/// Closed form for commuting diagonal pairs: min_j Re(conj(a_j) t_j)/|a_j|^2
/// over a_j != 0.
inline double diagonal_b(const ComplexVector& t, const ComplexVector& a) {
  double b = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < t.size(); ++j)
    if (std::abs(a(j)) > 0.0) b = std::min(b, (std::conj(a(j)) * t(j)).real() / std::norm(a(j)));
  return b;
}

inline OperatorPair generate_pair(PairFamily family, Eigen::Index dim, const GeneratorParams& params,
                                  std::uint64_t seed) {
  if (dim < 1) fail(ErrorKind::InvalidArgument, "dim must be >= 1");
  Rng rng(derive_seed(seed, static_cast<std::uint64_t>(family) * 1000003ULL + static_cast<std::uint64_t>(dim)));
  OperatorPair p;
  switch (family) {
    case PairFamily::Diagonal:
      p = detail::diagonal_pair(dim, params, rng);
      break;
    case PairFamily::ScalarMultiple: {
      if (!(params.gamma > 0.0) || !std::isfinite(params.gamma))
        fail(ErrorKind::InvalidArgument, "scalar-multiple family needs gamma > 0");
      p.T = detail::random_accretive(dim, params.skew_scale, rng);
      p.A = params.gamma * p.T;
      break;
    }
    case PairFamily::Rotated: {
      const OperatorPair d = detail::diagonal_pair(dim, params, rng);
      const ComplexMatrix u = rng.unitary(dim);
      p.T = u * d.T * u.adjoint();
      p.A = u * d.A * u.adjoint();
      break;
    }
    case PairFamily::Adversarial: {
      for (int attempt = 0;; ++attempt) {
        if (attempt >= params.retries)
          fail(ErrorKind::GenerationFailed, "no failing pair within " + std::to_string(params.retries) + " draws");
        p.T = detail::random_accretive(dim, params.skew_scale, rng);
        p.A = detail::random_accretive(dim, params.skew_scale, rng);
        try {
          if (compute_b(p).kind == BKind::ConditionFails) break;
        } catch (const LabError& e) {
          if (e.kind() != ErrorKind::MethodDisagreement) throw;
        }
      }
      break;
    }
    case PairFamily::User:
      fail(ErrorKind::InvalidArgument, "the user family is read from files, not generated");
  }
  p.family = family;
  p.seed = seed;
  return p;
}

}  // namespace accretive
