#pragma once

// End-to-end certificate for one operator pair. Inequalities forced by the
// invertibility argument for t + T + A are hard checks; the m-omega
// accretivity conclusion and the holomorphy angles are recorded audits.

#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "accretive/perturbation.hpp"
#include "accretive/semigroup.hpp"

namespace accretive {

enum class LemmaBranch { ConditionFails, Degenerate, MAccretive, Sectorial, NumericalFailure };

inline std::string_view to_string(LemmaBranch b) {
  switch (b) {
    case LemmaBranch::ConditionFails: return "condition_fails";
    case LemmaBranch::Degenerate: return "degenerate";
    case LemmaBranch::MAccretive: return "m_accretive";
    case LemmaBranch::Sectorial: return "sectorial";
    case LemmaBranch::NumericalFailure: return "numerical_failure";
  }
  return "numerical_failure";
}

struct CheckRecord {
  double param = 0.0;  // t, lambda or |mu|
  double quantity = 0.0;
  double bound = 0.0;
  bool pass = false;
  bool marginal = false;
  std::optional<Complex> point;  // mu for sector samples
};

struct CheckGroup {
  std::vector<CheckRecord> records;
  std::string error;  // set when the check itself raised; counts as one failure

  int passed() const {
    int n = 0;
    for (const auto& r : records) n += r.pass ? 1 : 0;
    return n;
  }
  int failed() const {
    int n = error.empty() ? 0 : 1;
    for (const auto& r : records) n += r.pass ? 0 : 1;
    return n;
  }
};

struct HolomorphicAudit {
  std::string label;  // "omega_corollary" or "omega_lemma"
  double omega = 0.0;
  int samples = 0;
  int violations = 0;
  double max_norm = 0.0;
  Complex worst_z{};
  bool holds() const { return violations == 0; }
};

struct PerturbationCertificate {
  PairFamily family = PairFamily::User;
  std::optional<std::uint64_t> seed;
  Eigen::Index dim = 0;
  OptimalConstant b;
  LemmaBranch branch = LemmaBranch::ConditionFails;
  std::optional<SectorPrediction> prediction;
  std::map<std::string, CheckGroup> bound_checks;
  std::optional<ClaimAuditRecord> claim_audit;
  std::vector<HolomorphicAudit> holomorphic_audits;
  std::vector<std::string> notes;

  int hard_checks_passed() const {
    int n = 0;
    for (const auto& [name, g] : bound_checks) n += g.passed();
    return n;
  }
  int hard_checks_failed() const {
    int n = 0;
    for (const auto& [name, g] : bound_checks) n += g.failed();
    return n;
  }
  bool audit_violated() const { return claim_audit && !claim_audit->lemma_claim_holds; }
};

class CertificateFailure : public LabError {
 public:
  explicit CertificateFailure(PerturbationCertificate cert)
      : LabError(ErrorKind::CertificateFailure,
                 std::to_string(cert.hard_checks_failed()) + " hard check(s) failed"),
        certificate_(std::move(cert)) {}
  const PerturbationCertificate& certificate() const noexcept { return certificate_; }

 private:
  PerturbationCertificate certificate_;
};

struct VerifyConfig {
  ToleranceConfig tol;
  std::vector<double> t_grid = default_t_grid();
  std::vector<double> lambda_grid = default_lambda_grid();
  std::vector<double> epsilons{0.05, 0.1};
  int sector_samples = 64;
  int n_angles = kDefaultAngles;
  std::uint64_t seed = 0;
  bool audits = true;  // false skips the audit-only measurements, leaving hard checks
};

namespace detail {

template <typename F>
void run_group(PerturbationCertificate& cert, const std::string& name, F&& body) {
  CheckGroup& g = cert.bound_checks[name];
  try {
    body(g);
  } catch (const LabError& e) {
    g.error = e.what();
  }
}

inline CheckRecord from_bound(const BoundCheck& c) { return {c.param, c.quantity, c.bound, c.pass, c.marginal, {}}; }

inline HolomorphicAudit holomorphic_audit(const ComplexMatrix& s, const std::string& label, double omega,
                                          const ToleranceConfig& tol) {
  HolomorphicAudit a;
  a.label = label;
  a.omega = omega;
  const auto samples = holomorphic_contraction_check(s, omega, default_probe(omega, tol), tol);
  a.samples = static_cast<int>(samples.size());
  for (const auto& h : samples) {
    if (!h.pass) ++a.violations;
    if (h.norm > a.max_norm) {
      a.max_norm = h.norm;
      a.worst_z = h.z;
    }
  }
  return a;
}

inline void certify_m_accretive(PerturbationCertificate& cert, const OperatorPair& pair, const VerifyConfig& cfg) {
  const ComplexMatrix s = pair.sum();
  run_group(cert, "sum_accretive", [&](CheckGroup& g) {
    const double lmin = min_eig_hermitian(hermitian_part(s), cfg.tol);
    const double slack = cfg.tol.eig_tol * matrix_scale(s);
    const Verdict v = compare_ge(lmin, 0.0, slack);
    g.records.push_back({0.0, lmin, 0.0, v.pass, v.marginal, {}});
  });
  run_group(cert, "sum_resolvent_bound", [&](CheckGroup& g) {
    for (const auto& c : check_resolvent_bound(s, cfg.lambda_grid, cfg.tol))
      g.records.push_back({c.lambda, c.norm, c.bound, c.pass, c.marginal, {}});
  });
  run_group(cert, "semigroup_contraction", [&](CheckGroup& g) {
    SemigroupProbe probe = default_probe(std::numbers::pi / 4, cfg.tol);
    probe.t_grid = cfg.t_grid;
    for (const auto& c : semigroup_contraction_check(s, probe, cfg.tol))
      g.records.push_back({c.t, c.norm, 1.0, c.pass, false, {}});
  });
}

inline void certify_sectorial(PerturbationCertificate& cert, const OperatorPair& pair, const VerifyConfig& cfg) {
  const double b = cert.b.value;
  const SectorPrediction pred = predicted_sector(b);
  cert.prediction = pred;
  const ToleranceConfig& tol = cfg.tol;

  run_group(cert, "relative_bound", [&](CheckGroup& g) {
    const RelativeBoundResult r = relative_bound_check(pair, b, tol);
    g.records.push_back({0.0, r.measured_ratio, 1.0 / b, r.pass, false, {}});
  });
  run_group(cert, "contraction", [&](CheckGroup& g) {
    for (const auto& c : contraction_check(pair, b, cfg.t_grid, tol)) g.records.push_back(from_bound(c));
  });
  run_group(cert, "neumann_inverse", [&](CheckGroup& g) {
    for (const auto& c : neumann_inverse_bound_check(pair, b, cfg.t_grid, tol)) g.records.push_back(from_bound(c));
  });
  run_group(cert, "resolvent_uniform", [&](CheckGroup& g) {
    for (const auto& c : resolvent_uniform_bound(pair, pred.M, cfg.t_grid, tol)) g.records.push_back(from_bound(c));
  });
  run_group(cert, "factorization_identity", [&](CheckGroup& g) {
    for (double t : cfg.t_grid) {
      const double res = factorization_identity_check(pair, t, tol);
      g.records.push_back({t, res, kFactorizationTolerance, res <= kFactorizationTolerance, false, {}});
    }
  });
  for (std::size_t k = 0; k < cfg.epsilons.size(); ++k) {
    const double eps = cfg.epsilons[k];
    char name[48];
    std::snprintf(name, sizeof name, "sector_resolvent_eps_%g", eps);
    if (!(eps > 0.0) || !(eps < std::asin(1.0 / pred.M))) {
      cert.notes.push_back(std::string(name) + ": skipped, eps outside (0, arcsin(1/M))");
      continue;
    }
    run_group(cert, name, [&](CheckGroup& g) {
      const std::uint64_t seed = derive_seed(cfg.seed, 0x5ec7000ULL + k);
      for (const auto& s : sector_resolvent_bound(pair, pred.M, eps, cfg.sector_samples, seed, tol))
        g.records.push_back({std::abs(s.mu), s.norm, s.bound, s.pass, false, s.mu});
    });
  }
  run_group(cert, "accretive_product", [&](CheckGroup& g) {
    for (const auto& c : accretive_product_check(pair, cfg.t_grid, tol))
      g.records.push_back({c.t, c.min_hermitian_eig, 0.0, c.pass, false, {}});
  });

  if (!cfg.audits) return;
  cert.claim_audit = audit_sector_claim(pair, b, tol, cfg.n_angles);
  const ComplexMatrix s = pair.sum();
  cert.holomorphic_audits.push_back(holomorphic_audit(s, "omega_corollary", pred.omega_corollary, tol));
  cert.holomorphic_audits.push_back(holomorphic_audit(s, "omega_lemma", pred.omega_lemma, tol));
}

}  // namespace detail

/// Runs every applicable check and returns the certificate without
/// throwing on hard-check failures.
inline PerturbationCertificate build_certificate(const OperatorPair& pair, const VerifyConfig& cfg = {}) {
  validate_pair(pair);
  PerturbationCertificate cert;
  cert.family = pair.family;
  cert.seed = pair.seed;
  cert.dim = pair.dim();
  try {
    cert.b = compute_b(pair, cfg.tol);
  } catch (const LabError& e) {
    cert.branch = LemmaBranch::NumericalFailure;
    cert.bound_checks["compute_b"].error = e.what();
    return cert;
  }
  switch (cert.b.kind) {
    case BKind::ConditionFails:
      cert.branch = LemmaBranch::ConditionFails;
      cert.notes.push_back("hypothesis does not hold: " + cert.b.reason + "; no claims tested");
      break;
    case BKind::Infinite:
      cert.branch = LemmaBranch::Degenerate;
      cert.notes.push_back("degenerate: A vanishes, no sector prediction");
      break;
    case BKind::Finite:
      if (cert.b.value <= 1.0) {
        cert.branch = LemmaBranch::MAccretive;
        detail::certify_m_accretive(cert, pair, cfg);
      } else {
        cert.branch = LemmaBranch::Sectorial;
        detail::certify_sectorial(cert, pair, cfg);
      }
      break;
  }
  return cert;
}

/// build_certificate, raising CertificateFailure (which carries the full
/// certificate) when any hard check fails.
inline PerturbationCertificate verify_lemma(const OperatorPair& pair, const VerifyConfig& cfg = {}) {
  PerturbationCertificate cert = build_certificate(pair, cfg);
  if (cert.hard_checks_failed() > 0) throw CertificateFailure(std::move(cert));
  return cert;
}

}  // namespace accretive
