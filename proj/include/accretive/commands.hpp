#pragma once

// Command drivers behind the accretive_lab executable. Each returns the
// process exit code: 0 when every hard check passed, 1 when one failed (the
// report is still written), 2 for input or usage errors. Audits are recorded
// in the report and never change the exit code.

#include <charconv>
#include <cstdint>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "accretive/generators.hpp"
#include "accretive/lemma.hpp"
#include "accretive/parallel.hpp"
#include "accretive/report.hpp"
#include "accretive/trotter.hpp"

#ifndef ACCRETIVE_LAB_VERSION
#define ACCRETIVE_LAB_VERSION "0.0.0"
#endif

namespace accretive {

inline constexpr const char* kToolVersion = ACCRETIVE_LAB_VERSION;

struct CommandOptions {
  std::optional<std::string> t_path;
  std::optional<std::string> a_path;
  std::optional<std::string> family;
  std::optional<long long> dim;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;
  std::optional<double> tol;  // overrides eig_tol
  std::optional<std::string> out;
  std::optional<std::string> t_grid;
  std::optional<std::string> n_grid;
  std::optional<std::string> b_grid;
  std::optional<int> n_angles;
  bool waiver = false;
};

namespace detail {

inline double parse_double_arg(const std::string& s, const char* flag) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    fail(ErrorKind::InvalidArgument, std::string(flag) + ": bad number '" + s + "'");
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

/// "lo:hi:count" (linear, both ends included) or a comma-separated list.
inline std::vector<double> parse_grid(const std::string& spec, const char* flag) {
  std::vector<double> g;
  if (spec.find(':') != std::string::npos) {
    const auto parts = split(spec, ':');
    if (parts.size() != 3) fail(ErrorKind::InvalidArgument, std::string(flag) + ": expected lo:hi:count");
    const double lo = parse_double_arg(parts[0], flag);
    const double hi = parse_double_arg(parts[1], flag);
    const double count = parse_double_arg(parts[2], flag);
    if (count < 1 || count != std::floor(count) || count > 1e6)
      fail(ErrorKind::InvalidArgument, std::string(flag) + ": count must be a positive integer");
    const int n = static_cast<int>(count);
    for (int k = 0; k < n; ++k) g.push_back(n == 1 ? lo : lo + (hi - lo) * k / (n - 1));
  } else {
    for (const auto& p : split(spec, ',')) g.push_back(parse_double_arg(p, flag));
  }
  if (g.empty()) fail(ErrorKind::InvalidArgument, std::string(flag) + ": empty grid");
  return g;
}

inline std::vector<long long> parse_n_grid(const std::string& spec) {
  std::vector<long long> g;
  for (const auto& p : split(spec, ',')) {
    long long v = 0;
    const auto res = std::from_chars(p.data(), p.data() + p.size(), v);
    if (res.ec != std::errc() || res.ptr != p.data() + p.size() || v < 1)
      fail(ErrorKind::InvalidArgument, "--n-grid: bad entry '" + p + "'");
    g.push_back(v);
  }
  return g;
}

inline ToleranceConfig tolerance_of(const CommandOptions& o) {
  ToleranceConfig tol;
  if (o.tol) tol.eig_tol = *o.tol;
  tol.validate();
  return tol;
}

inline RunManifest manifest_of(const std::string& command, const CommandOptions& o) {
  RunManifest m;
  m.command = command;
  m.master_seed = o.seed;
  m.tolerance = tolerance_of(o);
  if (o.t_path) m.input_paths.push_back(*o.t_path);
  if (o.a_path) m.input_paths.push_back(*o.a_path);
  m.output_path = o.out.value_or("");
  m.tool_version = kToolVersion;
  if (o.family) m.arguments["family"] = *o.family;
  if (o.dim) m.arguments["dim"] = std::to_string(*o.dim);
  for (const auto& [k, v] : o.params) m.arguments["param." + k] = format_double(v);
  if (o.t_grid) m.arguments["t_grid"] = *o.t_grid;
  if (o.n_grid) m.arguments["n_grid"] = *o.n_grid;
  if (o.b_grid) m.arguments["b_grid"] = *o.b_grid;
  if (o.n_angles) m.arguments["n_angles"] = std::to_string(*o.n_angles);
  if (o.waiver) m.arguments["waiver"] = "true";
  return m;
}

inline Eigen::Index dim_of(const CommandOptions& o, Eigen::Index fallback) {
  const long long d = o.dim.value_or(fallback);
  if (d < 1 || d > 4096) fail(ErrorKind::InvalidArgument, "--dim must be in [1, 4096]");
  return static_cast<Eigen::Index>(d);
}

/// Either both matrices from files or a generated family instance.
inline OperatorPair load_pair(const CommandOptions& o) {
  if (o.t_path || o.a_path) {
    if (!o.t_path || !o.a_path) fail(ErrorKind::InvalidArgument, "--t and --a must be given together");
    if (o.family) fail(ErrorKind::InvalidArgument, "--family cannot be combined with --t/--a");
    OperatorPair p{read_matrix(*o.t_path), read_matrix(*o.a_path), PairFamily::User, std::nullopt};
    validate_pair(p);
    return p;
  }
  if (!o.family) fail(ErrorKind::InvalidArgument, "give --t/--a or --family");
  return generate_pair(parse_family(*o.family), dim_of(o, 4), GeneratorParams::from_map(o.params), o.seed);
}

inline int finish(const ReportDocument& doc, const CommandOptions& o, std::ostream& out) {
  if (o.out) {
    write_report(doc, *o.out);
  } else {
    out << format_report(doc);
  }
  return doc.summary().hard_checks_failed > 0 ? 1 : 0;
}

inline VerifyConfig verify_config(const CommandOptions& o, std::uint64_t seed) {
  VerifyConfig cfg;
  cfg.tol = tolerance_of(o);
  cfg.seed = seed;
  if (o.t_grid) cfg.t_grid = parse_grid(*o.t_grid, "--t-grid");
  require_positive_grid(cfg.t_grid, "--t-grid");
  if (o.n_angles) cfg.n_angles = *o.n_angles;
  return cfg;
}

inline std::string stem_of(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const auto dot = path.find_last_of('.');
  if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return path.substr(0, dot);
  return path;
}

inline Json polyline(const ComplexMatrix& t, int n_angles) {
  Json pts = Json::array();
  for (int k = 0; k < n_angles; ++k) {
    const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * k / n_angles;
    const SupportPoint s = numerical_range_support(t, phi);
    pts.push_back({{"phi", json_number(phi)},
                   {"support", json_number(s.value)},
                   {"re", json_number(s.boundary_point.real())},
                   {"im", json_number(s.boundary_point.imag())}});
  }
  return pts;
}

}  // namespace detail

inline int cmd_verify(const CommandOptions& o, std::ostream& out = std::cout) {
  const OperatorPair pair = detail::load_pair(o);
  ReportDocument doc;
  doc.manifest = detail::manifest_of("verify", o);
  const PerturbationCertificate cert = build_certificate(pair, detail::verify_config(o, o.seed));
  if (cert.claim_audit) doc.audits.push_back(*cert.claim_audit);
  doc.certificates.push_back(cert);
  return detail::finish(doc, o, out);
}

/// Writes <stem>.T.mtx and <stem>.A.mtx next to the report.
inline int cmd_generate(const CommandOptions& o, std::ostream& out = std::cout) {
  if (!o.family) fail(ErrorKind::InvalidArgument, "generate needs --family");
  if (!o.out) fail(ErrorKind::InvalidArgument, "generate needs --out");
  if (o.t_path || o.a_path) fail(ErrorKind::InvalidArgument, "generate does not read matrices");
  const OperatorPair pair = detail::load_pair(o);
  const std::string stem = detail::stem_of(*o.out);
  const std::string t_file = stem + ".T.mtx";
  const std::string a_file = stem + ".A.mtx";
  write_matrix(t_file, pair.T);
  write_matrix(a_file, pair.A);
  ReportDocument doc;
  doc.manifest = detail::manifest_of("generate", o);
  Json b_json = nullptr;
  try {
    b_json = to_json(compute_b(pair, doc.manifest.tolerance));
  } catch (const LabError& e) {
    b_json = {{"error", e.what()}};
  }
  doc.extras = {{"generated", {{"T", t_file}, {"A", a_file}, {"family", to_string(pair.family)}, {"dim", pair.dim()}, {"b", b_json}}}};
  return detail::finish(doc, o, out);
}

/// --t is the self-adjoint A, --a the accretive B. Generated families:
/// "hermitian-skew" (B = gamma (A + K)) and "commuting" (B = gamma A).
inline int cmd_trotter(const CommandOptions& o, std::ostream& out = std::cout) {
  const ToleranceConfig tol = detail::tolerance_of(o);
  ComplexMatrix a, b;
  if (o.t_path || o.a_path) {
    if (!o.t_path || !o.a_path) fail(ErrorKind::InvalidArgument, "--t and --a must be given together");
    a = read_matrix(*o.t_path);
    b = read_matrix(*o.a_path);
    require_same_dim(a, b);
  } else {
    if (!o.family) fail(ErrorKind::InvalidArgument, "give --t/--a or --family");
    double gamma = 0.5, skew = 1.0;
    for (const auto& [k, v] : o.params) {
      if (k == "gamma") gamma = v;
      else if (k == "skew") skew = v;
      else fail(ErrorKind::InvalidArgument, "unknown trotter parameter '" + k + "'");
    }
    const Eigen::Index dim = detail::dim_of(o, 4);
    if (*o.family == "hermitian-skew") {
      const TrotterPair p = generate_trotter_pair(dim, gamma, skew, o.seed);
      a = p.A;
      b = p.B;
    } else if (*o.family == "commuting") {
      a = generate_trotter_pair(dim, gamma, 0.0, o.seed).A;
      b = gamma * a;
    } else {
      fail(ErrorKind::InvalidArgument, "unknown trotter family '" + *o.family + "'");
    }
  }
  const std::vector<double> t_grid = o.t_grid ? detail::parse_grid(*o.t_grid, "--t-grid") : default_trotter_t_grid();
  require_positive_grid(t_grid, "--t-grid");
  const std::vector<long long> n_grid = o.n_grid ? detail::parse_n_grid(*o.n_grid) : default_trotter_n_grid();

  ReportDocument doc;
  doc.manifest = detail::manifest_of("trotter", o);
  try {
    doc.experiments.push_back(run_experiment(a, b, t_grid, n_grid, o.waiver, tol));
  } catch (const HypothesisFailed& e) {
    doc.extras = {{"hypothesis_failure", {{"error", e.what()}, {"report", to_json(e.report())}}}};
    doc.extra_hard_failures = 1;
  }
  return detail::finish(doc, o, out);
}

/// Target b over --b-grid for the diagonal, scalar-multiple (gamma = 1/b)
/// and rotated families; records predicted versus measured sector angles.
inline int cmd_sweep(const CommandOptions& o, std::ostream& out = std::cout) {
  if (o.t_path || o.a_path) fail(ErrorKind::InvalidArgument, "sweep generates its own pairs");
  if (!o.b_grid) fail(ErrorKind::InvalidArgument, "sweep needs --b-grid");
  const std::vector<double> b_grid = detail::parse_grid(*o.b_grid, "--b-grid");
  for (double b : b_grid)
    if (!(b > 0.0)) fail(ErrorKind::InvalidArgument, "--b-grid values must be positive");
  std::vector<PairFamily> families{PairFamily::Diagonal, PairFamily::ScalarMultiple, PairFamily::Rotated};
  if (o.family) families = {parse_family(*o.family)};
  const Eigen::Index dim = detail::dim_of(o, 4);
  GeneratorParams base = GeneratorParams::from_map(o.params);

  struct Instance {
    double target = 0.0;
    PairFamily family = PairFamily::User;
    std::uint64_t seed = 0;
  };
  std::vector<Instance> instances;
  for (double b : b_grid)
    for (PairFamily f : families) {
      const std::uint64_t k = instances.size();
      instances.push_back({b, f, derive_seed(o.seed, k)});
    }

  std::vector<PerturbationCertificate> certs(instances.size());
  std::vector<std::string> errors(instances.size());
  parallel_for(instances.size(), [&](std::size_t i) {
    const Instance& in = instances[i];
    GeneratorParams p = base;
    p.target_b = in.target;
    p.gamma = 1.0 / in.target;
    try {
      const OperatorPair pair = generate_pair(in.family, dim, p, in.seed);
      certs[i] = build_certificate(pair, detail::verify_config(o, in.seed));
    } catch (const LabError& e) {
      errors[i] = e.what();
    }
  });

  ReportDocument doc;
  doc.manifest = detail::manifest_of("sweep", o);
  Json rows = Json::array();
  for (std::size_t i = 0; i < instances.size(); ++i) {
    Json row = {{"target_b", json_number(instances[i].target)},
                {"family", to_string(instances[i].family)},
                {"seed", instances[i].seed}};
    if (!errors[i].empty()) {
      row["error"] = errors[i];
      ++doc.extra_hard_failures;
      rows.push_back(std::move(row));
      continue;
    }
    const PerturbationCertificate& c = certs[i];
    row["b"] = to_json(c.b);
    row["branch"] = to_string(c.branch);
    if (c.prediction) {
      row["omega_lemma"] = json_number(c.prediction->omega_lemma);
      row["omega_corollary"] = json_number(c.prediction->omega_corollary);
    }
    if (c.claim_audit) {
      row["measured_sector"] = to_json(c.claim_audit->measured);
      row["lemma_claim_holds"] = c.claim_audit->lemma_claim_holds;
      doc.audits.push_back(*c.claim_audit);
    }
    row["hard_checks_failed"] = c.hard_checks_failed();
    rows.push_back(std::move(row));
    doc.certificates.push_back(c);
  }
  doc.extras = {{"sweep", std::move(rows)}};
  return detail::finish(doc, o, out);
}

/// Boundary polylines {phi, support, re, im} of the numerical range of T,
/// and of A and T + A when a pair is given.
inline int cmd_nr_dump(const CommandOptions& o, std::ostream& out = std::cout) {
  const int n_angles = o.n_angles.value_or(kDefaultAngles);
  if (n_angles < 8 || n_angles > 1000000) fail(ErrorKind::InvalidArgument, "--n-angles must be in [8, 1000000]");
  Json curves = Json::object();
  if (o.t_path && !o.a_path && !o.family) {
    curves["T"] = detail::polyline(read_matrix(*o.t_path), n_angles);
  } else {
    const OperatorPair pair = detail::load_pair(o);
    curves["T"] = detail::polyline(pair.T, n_angles);
    curves["A"] = detail::polyline(pair.A, n_angles);
    curves["T+A"] = detail::polyline(pair.sum(), n_angles);
  }
  ReportDocument doc;
  doc.manifest = detail::manifest_of("nr-dump", o);
  doc.extras = {{"numerical_range", std::move(curves)}};
  return detail::finish(doc, o, out);
}

/// Dispatches by name and maps any LabError (or other exception) to exit 2
/// with a one-line diagnostic.
inline int run_command(const std::string& name, const CommandOptions& o, std::ostream& out = std::cout,
                       std::ostream& err = std::cerr) {
  try {
    if (name == "verify") return cmd_verify(o, out);
    if (name == "generate") return cmd_generate(o, out);
    if (name == "trotter") return cmd_trotter(o, out);
    if (name == "sweep") return cmd_sweep(o, out);
    if (name == "nr-dump") return cmd_nr_dump(o, out);
    err << "accretive_lab: unknown command '" << name << "'\n";
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    err << "accretive_lab: " << msg << "\n";
  }
  return 2;
}

}  // namespace accretive
