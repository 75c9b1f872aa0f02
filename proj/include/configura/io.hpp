#pragma once

// Text and JSON formats for rulers and incidence matrices.

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "configura/error.hpp"
#include "configura/matrix.hpp"
#include "configura/ruler.hpp"

namespace configura::io {

using json = nlohmann::json;

// "v:k:a1,a2,...,ak"
inline std::string ruler_to_text(const ModularRuler& r) {
  std::string s = std::to_string(r.v) + ":" + std::to_string(r.k()) + ":";
  for (std::size_t i = 0; i < r.marks.size(); ++i) s += (i ? "," : "") + std::to_string(r.marks[i]);
  return s;
}

inline ModularRuler ruler_from_text(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  require(b != std::string::npos, ErrorCode::ParseError, "expected v:k:marks");
  try {
    const auto v = std::stoul(text.substr(0, a));
    const auto k = std::stoul(text.substr(a + 1, b - a - 1));
    Marks marks;
    std::stringstream ss(text.substr(b + 1));
    for (std::string tok; std::getline(ss, tok, ',');)
      if (tok.find_first_not_of(" \t\r\n") != std::string::npos) marks.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    require(marks.size() == k, ErrorCode::ParseError, "mark count does not match k");
    return ModularRuler(std::move(marks), static_cast<std::uint32_t>(v));
  } catch (const std::logic_error&) {
    fail(ErrorCode::ParseError, "bad number in ruler text");
  }
}

inline json ruler_to_json(const ModularRuler& r) { return {{"v", r.v}, {"marks", r.marks}}; }

inline ModularRuler ruler_from_json(const json& j) {
  try {
    return ModularRuler(j.at("marks").get<Marks>(), j.at("v").get<std::uint32_t>());
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

// One row per line of '0'/'1'.
inline std::string matrix_to_plain(const IncidenceMatrix& m) {
  std::string s;
  s.reserve(static_cast<std::size_t>(m.nRows) * (m.nCols + 1));
  for (std::uint32_t i = 0; i < m.nRows; ++i) {
    for (std::uint32_t j = 0; j < m.nCols; ++j) s += m.get(i, j) ? '1' : '0';
    s += '\n';
  }
  return s;
}

inline IncidenceMatrix matrix_from_plain(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  require(!lines.empty(), ErrorCode::ParseError, "empty matrix");
  IncidenceMatrix m(static_cast<std::uint32_t>(lines.size()), static_cast<std::uint32_t>(lines[0].size()));
  for (std::uint32_t i = 0; i < m.nRows; ++i) {
    require(lines[i].size() == m.nCols, ErrorCode::ParseError, "ragged row " + std::to_string(i));
    for (std::uint32_t j = 0; j < m.nCols; ++j) {
      const char c = lines[i][j];
      require(c == '0' || c == '1', ErrorCode::ParseError, "matrix entries must be 0 or 1");
      if (c == '1') m.set(i, j);
    }
  }
  return m;
}

/// {"v", "k", "rows"}; k is the first row weight and b the column count when it differs from v.
inline json matrix_to_json(const IncidenceMatrix& m) {
  json rows = json::array();
  for (std::uint32_t i = 0; i < m.nRows; ++i) rows.push_back(m.row_support(i));
  json j = {{"v", m.nRows}, {"k", m.nRows ? m.rows[0].count() : 0}, {"rows", rows}};
  if (m.nCols != m.nRows) j["b"] = m.nCols;
  return j;
}

inline IncidenceMatrix matrix_from_json(const json& j) {
  try {
    const auto v = j.at("v").get<std::uint32_t>();
    const auto b = j.contains("b") ? j.at("b").get<std::uint32_t>() : v;
    const auto& rows = j.at("rows");
    require(rows.size() == v, ErrorCode::ParseError, "row count does not match v");
    IncidenceMatrix m(v, b);
    for (std::uint32_t i = 0; i < v; ++i)
      for (auto c : rows[i].get<std::vector<std::uint32_t>>()) {
        require(c < b, ErrorCode::ParseError, "column index out of range");
        m.set(i, c);
      }
    return m;
  } catch (const json::exception& e) {
    fail(ErrorCode::ParseError, e.what());
  }
}

// alist: "n m", max column/row weights, the weights, then 1-based supports
// per column and per row, zero-padded to the maximum.
inline std::string matrix_to_alist(const IncidenceMatrix& m) {
  const auto cols = m.column_supports();
  std::vector<std::vector<std::uint32_t>> rows(m.nRows);
  std::size_t maxCol = 0, maxRow = 0;
  for (std::uint32_t i = 0; i < m.nRows; ++i) maxRow = std::max(maxRow, (rows[i] = m.row_support(i)).size());
  for (const auto& c : cols) maxCol = std::max(maxCol, c.size());
  std::ostringstream os;
  os << m.nCols << ' ' << m.nRows << '\n' << maxCol << ' ' << maxRow << '\n';
  auto weights = [&](const auto& sets) {
    for (std::size_t i = 0; i < sets.size(); ++i) os << (i ? " " : "") << sets[i].size();
    os << '\n';
  };
  auto supports = [&](const auto& sets, std::size_t width) {
    for (const auto& s : sets) {
      for (std::size_t i = 0; i < width; ++i) os << (i ? " " : "") << (i < s.size() ? s[i] + 1 : 0);
      os << '\n';
    }
  };
  weights(cols);
  weights(rows);
  supports(cols, maxCol);
  supports(rows, maxRow);
  return os.str();
}

inline IncidenceMatrix matrix_from_alist(const std::string& text) {
  std::istringstream is(text);
  std::uint32_t n = 0, mrows = 0;
  std::size_t maxCol = 0, maxRow = 0;
  require(static_cast<bool>(is >> n >> mrows >> maxCol >> maxRow), ErrorCode::ParseError, "bad alist header");
  std::vector<std::size_t> colW(n), rowW(mrows);
  for (auto& w : colW) require(static_cast<bool>(is >> w), ErrorCode::ParseError, "bad column weights");
  for (auto& w : rowW) require(static_cast<bool>(is >> w), ErrorCode::ParseError, "bad row weights");
  IncidenceMatrix m(mrows, n);
  for (std::uint32_t j = 0; j < n; ++j)
    for (std::size_t e = 0; e < maxCol; ++e) {
      std::uint32_t x = 0;
      require(static_cast<bool>(is >> x) && x <= mrows, ErrorCode::ParseError, "bad column support");
      if (e < colW[j]) {
        require(x >= 1, ErrorCode::ParseError, "missing column entry");
        m.set(x - 1, j);
      }
    }
  for (std::uint32_t i = 0; i < mrows; ++i)
    for (std::size_t e = 0; e < maxRow; ++e) {
      std::uint32_t x = 0;
      require(static_cast<bool>(is >> x) && x <= n, ErrorCode::ParseError, "bad row support");
      if (e < rowW[i]) require(x >= 1 && m.get(i, x - 1), ErrorCode::ParseError, "row and column lists disagree");
    }
  return m;
}

}  // namespace configura::io
