#pragma once

// Canonical JSON reports. Objects are std::map backed so keys come out
// sorted; doubles use the shortest round-trip form; non-finite values are
// encoded as the strings "inf", "-inf" and "nan".

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "accretive/lemma.hpp"
#include "accretive/matrix_io.hpp"
#include "accretive/trotter.hpp"

namespace accretive {

using Json = nlohmann::json;

inline Json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline Json json_complex(const Complex& z) { return Json::array({json_number(z.real()), json_number(z.imag())}); }

inline Json to_json(const ToleranceConfig& t) {
  return {{"eig_tol", json_number(t.eig_tol)}, {"rank_tol", json_number(t.rank_tol)}, {"angle_tol", json_number(t.angle_tol)}};
}

inline std::string_view to_string(BKind k) {
  switch (k) {
    case BKind::Finite: return "finite";
    case BKind::Infinite: return "infinite";
    case BKind::ConditionFails: return "condition_fails";
  }
  return "condition_fails";
}

inline Json to_json(const OptimalConstant& b) {
  Json j = {{"kind", to_string(b.kind)}};
  if (b.kind != BKind::ConditionFails) {
    j["value"] = json_number(b.value);
    j["pencil"] = json_number(b.pencil);
    j["bisection"] = json_number(b.bisection);
  }
  if (!b.reason.empty()) j["reason"] = b.reason;
  return j;
}

inline Json to_json(const SectorMeasurement& m) {
  Json j = {{"full_half_plane", m.full_half_plane}};
  j["angle"] = m.full_half_plane ? Json(nullptr) : json_number(m.angle);
  j["witness"] = m.has_witness ? json_complex(m.witness) : Json(nullptr);
  return j;
}

inline Json to_json(const ClaimAuditRecord& a) {
  return {{"measured_sector", to_json(a.measured)},
          {"omega_lemma", json_number(a.omega_lemma)},
          {"lemma_claim_holds", a.lemma_claim_holds},
          {"violation_witness", a.violation_witness ? json_complex(*a.violation_witness) : Json(nullptr)}};
}

inline Json to_json(const CheckGroup& g) {
  Json records = Json::array();
  for (const auto& r : g.records) {
    Json jr = {{"param", json_number(r.param)},
               {"quantity", json_number(r.quantity)},
               {"bound", json_number(r.bound)},
               {"pass", r.pass},
               {"marginal", r.marginal}};
    if (r.point) jr["mu"] = json_complex(*r.point);
    records.push_back(std::move(jr));
  }
  Json j = {{"records", std::move(records)}, {"passed", g.passed()}, {"failed", g.failed()}};
  if (!g.error.empty()) j["error"] = g.error;
  return j;
}

inline Json to_json(const PerturbationCertificate& c) {
  Json checks = Json::object();
  for (const auto& [name, g] : c.bound_checks) checks[name] = to_json(g);
  Json holo = Json::array();
  for (const auto& h : c.holomorphic_audits)
    holo.push_back({{"label", h.label},
                    {"omega", json_number(h.omega)},
                    {"samples", h.samples},
                    {"violations", h.violations},
                    {"max_norm", json_number(h.max_norm)},
                    {"worst_z", json_complex(h.worst_z)},
                    {"holds", h.holds()}});
  Json j = {{"family", to_string(c.family)},
            {"dim", c.dim},
            {"b", to_json(c.b)},
            {"branch", to_string(c.branch)},
            {"bound_checks", std::move(checks)},
            {"holomorphic_audits", std::move(holo)},
            {"notes", c.notes},
            {"hard_checks_passed", c.hard_checks_passed()},
            {"hard_checks_failed", c.hard_checks_failed()}};
  j["seed"] = c.seed ? Json(*c.seed) : Json(nullptr);
  if (c.prediction) {
    j["prediction"] = {{"omega_lemma", json_number(c.prediction->omega_lemma)},
                       {"omega_corollary", json_number(c.prediction->omega_corollary)},
                       {"M", json_number(c.prediction->M)}};
  } else {
    j["prediction"] = nullptr;
  }
  j["claim_audit"] = c.claim_audit ? to_json(*c.claim_audit) : Json(nullptr);
  return j;
}

inline Json to_json(const HypothesisReport& h) {
  Json j = {{"A_selfadjoint", h.A_selfadjoint},
            {"B_accretive", h.B_accretive},
            {"b_gt_1", h.b_gt_1},
            {"relative_bound_a", json_number(h.relative_bound_a)},
            {"waived", h.waived},
            {"failing_clause", h.failing_clause},
            {"log", h.log}};
  j["b"] = h.b ? to_json(*h.b) : Json(nullptr);
  if (h.relative_bound) {
    j["relative_bound"] = {{"pass", h.relative_bound->pass},
                           {"measured_ratio", json_number(h.relative_bound->measured_ratio)}};
  } else {
    j["relative_bound"] = nullptr;
  }
  return j;
}

inline Json json_table(const std::vector<std::vector<double>>& rows) {
  Json t = Json::array();
  for (const auto& row : rows) {
    Json r = Json::array();
    for (double v : row) r.push_back(json_number(v));
    t.push_back(std::move(r));
  }
  return t;
}

/// Hard checks carried by a Trotter experiment: adjoint symmetry at every
/// grid point and, on hypothesis-passing instances, error <= 2.
struct TrotterChecks {
  int passed = 0;
  int failed = 0;
};

inline constexpr double kAdjointSymmetryTolerance = 1e-12;

inline TrotterChecks trotter_checks(const TrotterExperiment& ex) {
  TrotterChecks c;
  for (std::size_t i = 0; i < ex.errors.size(); ++i) {
    for (std::size_t j = 0; j < ex.errors[i].size(); ++j) {
      const bool sym = std::abs(ex.errors[i][j] - ex.adjoint_errors[i][j]) <= kAdjointSymmetryTolerance;
      (sym ? c.passed : c.failed)++;
      if (ex.hypotheses.passed()) (ex.errors[i][j] <= 2.0 ? c.passed : c.failed)++;
    }
  }
  return c;
}

inline Json to_json(const TrotterExperiment& ex) {
  std::vector<double> ns(ex.n_grid.begin(), ex.n_grid.end());
  Json sup = Json::array();
  for (double v : ex.sup_errors) sup.push_back(json_number(v));
  Json ts = Json::array();
  for (double v : ex.t_grid) ts.push_back(json_number(v));
  const TrotterChecks checks = trotter_checks(ex);
  Json j = {{"dim", ex.A.rows()},
            {"t_grid", std::move(ts)},
            {"n_grid", ex.n_grid},
            {"errors", json_table(ex.errors)},
            {"adjoint_errors", json_table(ex.adjoint_errors)},
            {"sup_errors", std::move(sup)},
            {"alpha_flagged", ex.alpha_flagged},
            {"hypotheses", to_json(ex.hypotheses)},
            {"hard_checks_passed", checks.passed},
            {"hard_checks_failed", checks.failed}};
  if (ex.fit) {
    // the rate granted without any coupling condition is alpha in (0, 1/2); logged for comparison only
    j["fit"] = {{"L", json_number(ex.fit->L)},
                {"alpha", json_number(ex.fit->alpha)},
                {"residual", json_number(ex.fit->residual)},
                {"alpha_exceeds_unconditional_range", ex.fit->alpha >= 0.5}};
    j["fit_skipped"] = nullptr;
  } else {
    j["fit"] = nullptr;
    j["fit_skipped"] = ex.fit_skipped;
  }
  return j;
}

/// t,n,error,adjoint_error with a header row.
inline std::string trotter_csv(const TrotterExperiment& ex) {
  std::string out = "t,n,error,adjoint_error\n";
  for (std::size_t i = 0; i < ex.t_grid.size(); ++i)
    for (std::size_t j = 0; j < ex.n_grid.size(); ++j)
      out += format_double(ex.t_grid[i]) + "," + std::to_string(ex.n_grid[j]) + "," + format_double(ex.errors[i][j]) +
             "," + format_double(ex.adjoint_errors[i][j]) + "\n";
  return out;
}

struct RunManifest {
  std::string command;
  std::uint64_t master_seed = 0;
  ToleranceConfig tolerance;
  std::vector<std::string> input_paths;
  std::string output_path;
  std::string tool_version;
  std::map<std::string, std::string> arguments;  // remaining flags, verbatim
};

inline Json to_json(const RunManifest& m) {
  return {{"command", m.command},
          {"master_seed", m.master_seed},
          {"tolerance", to_json(m.tolerance)},
          {"input_paths", m.input_paths},
          {"output_path", m.output_path},
          {"tool_version", m.tool_version},
          {"arguments", m.arguments}};
}

struct ReportSummary {
  int hard_checks_passed = 0;
  int hard_checks_failed = 0;
  int audits_violated = 0;
};

struct ReportDocument {
  RunManifest manifest;
  std::vector<PerturbationCertificate> certificates;
  std::vector<TrotterExperiment> experiments;
  std::vector<ClaimAuditRecord> audits;
  Json extras = Json::object();  // command-specific payload (boundaries, generated files, failures)
  int extra_hard_failures = 0;   // hard failures recorded outside certificates/experiments

  ReportSummary summary() const {
    ReportSummary s;
    for (const auto& c : certificates) {
      s.hard_checks_passed += c.hard_checks_passed();
      s.hard_checks_failed += c.hard_checks_failed();
    }
    for (const auto& e : experiments) {
      const TrotterChecks t = trotter_checks(e);
      s.hard_checks_passed += t.passed;
      s.hard_checks_failed += t.failed;
    }
    s.hard_checks_failed += extra_hard_failures;
    for (const auto& a : audits) s.audits_violated += a.lemma_claim_holds ? 0 : 1;
    return s;
  }
};

inline std::string csv_sidecar_path(const std::string& report_path, std::size_t index) {
  return report_path + ".trotter-" + std::to_string(index) + ".csv";
}

inline Json to_json(const ReportDocument& doc) {
  Json certs = Json::array();
  for (const auto& c : doc.certificates) certs.push_back(to_json(c));
  Json exps = Json::array();
  for (std::size_t k = 0; k < doc.experiments.size(); ++k) {
    Json e = to_json(doc.experiments[k]);
    e["csv"] = doc.manifest.output_path.empty() ? Json(nullptr) : Json(csv_sidecar_path(doc.manifest.output_path, k));
    exps.push_back(std::move(e));
  }
  Json audits = Json::array();
  for (const auto& a : doc.audits) audits.push_back(to_json(a));
  const ReportSummary s = doc.summary();
  Json j = {{"manifest", to_json(doc.manifest)},
            {"certificates", std::move(certs)},
            {"experiments", std::move(exps)},
            {"audits", std::move(audits)},
            {"summary",
             {{"hard_checks_passed", s.hard_checks_passed},
              {"hard_checks_failed", s.hard_checks_failed},
              {"audits_violated", s.audits_violated}}}};
  if (!doc.extras.empty()) j["extras"] = doc.extras;
  return j;
}

inline std::string format_report(const ReportDocument& doc) { return to_json(doc).dump(2) + "\n"; }

/// Writes the JSON report plus one CSV sidecar per Trotter experiment.
inline void write_report(const ReportDocument& doc, const std::string& path) {
  write_text(path, format_report(doc));
  for (std::size_t k = 0; k < doc.experiments.size(); ++k)
    write_text(csv_sidecar_path(path, k), trotter_csv(doc.experiments[k]));
}

}  // namespace accretive
