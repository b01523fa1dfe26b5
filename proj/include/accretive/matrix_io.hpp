#pragma once

// Matrix Market (array / coordinate, complex general) and a small JSON form
// {"dim": n, "entries": [[re, im], ...]} with row-major entries.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "accretive/numerics.hpp"

namespace accretive {

/// Shortest decimal that round-trips to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

[[noreturn]] inline void parse_error(const std::string& path, std::size_t line, const std::string& what) {
  fail(ErrorKind::ParseError, path + ":" + std::to_string(line) + ": " + what);
}

inline std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string tok; is >> tok;) out.push_back(tok);
  return out;
}

inline double parse_number(const std::string& tok, const std::string& path, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  if (!tok.empty() && tok.front() == '+') ++first;
  const auto res = std::from_chars(first, tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size() || !std::isfinite(v))
    parse_error(path, line, "bad number '" + tok + "'");
  return v;
}

inline long long parse_index(const std::string& tok, const std::string& path, std::size_t line) {
  long long v = 0;
  const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) parse_error(path, line, "bad integer '" + tok + "'");
  return v;
}

inline ComplexMatrix parse_matrix_market(const std::string& text, const std::string& path) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) parse_error(path, 1, "empty file");
  ++lineno;
  const auto header = split_ws(lower(line));
  if (header.size() != 5 || header[0] != "%%matrixmarket" || header[1] != "matrix")
    parse_error(path, lineno, "expected '%%MatrixMarket matrix <array|coordinate> complex general'");
  const bool coordinate = header[2] == "coordinate";
  if (!coordinate && header[2] != "array") parse_error(path, lineno, "unsupported layout '" + header[2] + "'");
  if (header[3] != "complex") parse_error(path, lineno, "field must be complex");
  if (header[4] != "general") parse_error(path, lineno, "symmetry must be general");

  auto next_data_line = [&](std::vector<std::string>& toks) {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line[0] == '%') continue;
      toks = split_ws(line);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<std::string> toks;
  if (!next_data_line(toks)) parse_error(path, lineno, "missing size line");
  if (toks.size() != (coordinate ? 3u : 2u)) parse_error(path, lineno, "malformed size line");
  const long long rows = parse_index(toks[0], path, lineno);
  const long long cols = parse_index(toks[1], path, lineno);
  if (rows < 1 || cols < 1) parse_error(path, lineno, "dimensions must be positive");
  if (rows != cols)
    fail(ErrorKind::NotSquare, path + ": " + std::to_string(rows) + "x" + std::to_string(cols) + " is not square");

  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  if (!coordinate) {
    const long long total = rows * cols;
    for (long long k = 0; k < total; ++k) {
      if (!next_data_line(toks))
        parse_error(path, lineno, "expected " + std::to_string(total) + " entries, found " + std::to_string(k));
      if (toks.size() != 2) parse_error(path, lineno, "expected 're im'");
      m(k % rows, k / rows) = {parse_number(toks[0], path, lineno), parse_number(toks[1], path, lineno)};
    }
  } else {
    const long long nnz = parse_index(toks[2], path, lineno);
    if (nnz < 0 || nnz > rows * cols) parse_error(path, lineno, "bad entry count");
    std::set<std::pair<long long, long long>> seen;
    for (long long k = 0; k < nnz; ++k) {
      if (!next_data_line(toks))
        parse_error(path, lineno, "expected " + std::to_string(nnz) + " entries, found " + std::to_string(k));
      if (toks.size() != 4) parse_error(path, lineno, "expected 'i j re im'");
      const long long i = parse_index(toks[0], path, lineno);
      const long long j = parse_index(toks[1], path, lineno);
      if (i < 1 || i > rows || j < 1 || j > cols) parse_error(path, lineno, "index out of range");
      if (!seen.insert({i, j}).second) parse_error(path, lineno, "duplicate entry");
      m(i - 1, j - 1) = {parse_number(toks[2], path, lineno), parse_number(toks[3], path, lineno)};
    }
  }
  if (next_data_line(toks)) parse_error(path, lineno, "trailing data after the last entry");
  return m;
}

inline std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(offset), '\n'));
}

inline ComplexMatrix parse_matrix_json(const std::string& text, const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(path, line_of_offset(text, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON");
  }
  if (!doc.is_object() || !doc.contains("dim") || !doc.contains("entries"))
    parse_error(path, 1, "expected an object with 'dim' and 'entries'");
  if (!doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) parse_error(path, 1, "'dim' must be a positive integer");
  const long long n = doc["dim"].get<long long>();
  const auto& entries = doc["entries"];
  if (!entries.is_array() || static_cast<long long>(entries.size()) != n * n)
    parse_error(path, 1, "'entries' must hold dim*dim [re, im] pairs");
  ComplexMatrix m(n, n);
  for (long long k = 0; k < n * n; ++k) {
    const auto& e = entries[static_cast<std::size_t>(k)];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
      parse_error(path, 1, "entry " + std::to_string(k) + " is not [re, im]");
    m(k / n, k % n) = {e[0].get<double>(), e[1].get<double>()};
  }
  if (!m.allFinite()) parse_error(path, 1, "non-finite entry");
  return m;
}

}  // namespace detail

/// Parses either format; the first non-blank character selects the parser.
inline ComplexMatrix parse_matrix(const std::string& text, const std::string& path = "<memory>") {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) detail::parse_error(path, 1, "empty input");
  ComplexMatrix m = text[first] == '{' ? detail::parse_matrix_json(text, path) : detail::parse_matrix_market(text, path);
  validate_matrix(m, path.c_str());
  return m;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::IoError, "write to '" + path + "' failed");
}

inline ComplexMatrix read_matrix(const std::string& path) { return parse_matrix(read_text(path), path); }

/// Dense column-major Matrix Market text, shortest round-trip decimals.
inline std::string format_matrix_market(const ComplexMatrix& m) {
  std::string out = "%%MatrixMarket matrix array complex general\n";
  out += std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      out += format_double(m(i, j).real()) + " " + format_double(m(i, j).imag()) + "\n";
  return out;
}

inline void write_matrix(const std::string& path, const ComplexMatrix& m) { write_text(path, format_matrix_market(m)); }

}  // namespace accretive
