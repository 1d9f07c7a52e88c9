#ifndef TWOSPIN_IO_HPP
#define TWOSPIN_IO_HPP

// Tabular output. Numbers are written with 9 significant digits so that
// identical runs give byte-identical files; infinities become "inf".

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "twospin/error.hpp"
#include "twospin/liouvillian.hpp"

namespace twospin::io {

inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

using Cell = std::variant<double, long, bool, std::string>;

inline std::string format_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
  if (const auto* l = std::get_if<long>(&c)) return std::to_string(*l);
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  return std::get<std::string>(c);
}

/// JSON value for a cell; doubles are rounded to the same 9 digits as CSV
/// and non-finite values are stored as strings.
inline nlohmann::json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_number(*d);
    return std::stod(format_number(*d));
  }
  if (const auto* l = std::get_if<long>(&c)) return *l;
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) {
    if (row.size() != columns.size())
      throw DomainError("row has " + std::to_string(row.size()) + " cells, table has " +
                        std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
  }
};

inline void write_csv(std::ostream& out, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
    out << '\n';
  }
}

/// Whitespace-separated columns with a '#' header line (gnuplot friendly).
inline void write_text(std::ostream& out, const Table& t) {
  out << '#';
  for (const auto& c : t.columns) out << ' ' << c;
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? " " : "") << format_cell(row[i]);
    out << '\n';
  }
}

/// Array of objects, one per row.
inline nlohmann::json to_json(const Table& t) {
  auto arr = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json obj = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = json_cell(row[i]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

inline std::vector<std::string> trajectory_columns() {
  std::vector<std::string> c{"t_gamma0", "t_lambda1"};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) c.push_back("alpha_" + std::to_string(i) + std::to_string(j));
  c.push_back("concurrence_numeric");
  c.push_back("concurrence_analytic");
  return c;
}

inline nlohmann::json generator_json(const GeneratorMatrix& g) {
  nlohmann::json j;
  j["size"] = 16;
  auto entries = nlohmann::json::array();
  for (int r = 0; r < 16; ++r)
    for (int c = 0; c < 16; ++c) entries.push_back(json_cell(g.entries(r, c)));
  j["entries"] = std::move(entries);
  j["delta_field"] = json_cell(g.params.delta_field);
  j["lamb_A"] = json_cell(g.params.lamb_A);
  j["lamb_B"] = json_cell(g.params.lamb_B);
  j["exchange_xi"] = json_cell(g.params.exchange_xi);
  j["include_lamb"] = g.include_lamb;
  j["include_exchange"] = g.include_exchange;
  j["gamma0"] = json_cell(g.rates.gamma0);
  j["occupation"] = json_cell(g.rates.occupation);
  j["delta"] = json_cell(g.rates.delta);
  return j;
}

inline nlohmann::json spectrum_json(const SpectrumReport& rep) {
  nlohmann::json j;
  j["generator"] = generator_json(rep.generator);
  j["condition_number"] = json_cell(rep.condition_number);
  j["biorthogonality_error"] = json_cell(rep.biorthogonality_error);
  auto modes = nlohmann::json::array();
  for (int l = 0; l < 16; ++l) {
    nlohmann::json m;
    m["index"] = l;
    m["label"] = to_string(rep.labels[static_cast<std::size_t>(l)]);
    m["re"] = json_cell(rep.eigenvalue(l).real());
    m["im"] = json_cell(rep.eigenvalue(l).imag());
    auto right = nlohmann::json::array();
    auto left = nlohmann::json::array();
    for (int k = 0; k < 16; ++k) {
      right.push_back({json_cell(rep.right(k, l).real()), json_cell(rep.right(k, l).imag())});
      left.push_back({json_cell(rep.left(l, k).real()), json_cell(rep.left(l, k).imag())});
    }
    m["right"] = std::move(right);
    m["left"] = std::move(left);
    modes.push_back(std::move(m));
  }
  j["modes"] = std::move(modes);
  return j;
}

} // namespace twospin::io

#endif // TWOSPIN_IO_HPP
