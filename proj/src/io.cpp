#include "csmsn/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "csmsn/errors.hpp"

namespace csmsn {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Eigen::Index Dataset::col(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j] == name) return static_cast<Eigen::Index>(j);
  throw DataError("dataset has no column named '" + name + "'");
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  // Trailing whitespace is tolerated, anything else is a parse error.
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0'))
    throw DataError("non-numeric cell at row " + std::to_string(row) + ", column " +
                    std::to_string(col + 1) + ": '" + cell + "'");
  return v;
}

}  // namespace

Dataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty file '" + path + "'");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  Dataset ds;
  ds.columns = split_line(line);
  if (ds.columns.empty()) throw DataError("no header columns in '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != ds.columns.size())
      throw DataError("ragged row " + std::to_string(lineno) + " in '" + path +
                      "': expected " + std::to_string(ds.columns.size()) +
                      " cells, got " + std::to_string(cells.size()));
    std::vector<double> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j)
      row[j] = parse_cell(cells[j], lineno, j);
    rows.push_back(std::move(row));
  }
  ds.values.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(ds.columns.size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      ds.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return ds;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const Eigen::MatrixXd& values) {
  if (values.cols() != static_cast<Eigen::Index>(columns.size()))
    throw DataError("write_csv: column count mismatch");
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (std::size_t j = 0; j < columns.size(); ++j)
    out << (j ? "," : "") << columns[j];
  out << "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      out << (j ? "," : "") << format_double(values(i, j));
    out << "\n";
  }
  if (!out) throw DataError("write failed for '" + path + "'");
}

Design build_design(const Dataset& ds, const DesignSpec& spec) {
  const Eigen::Index n = ds.values.rows();
  if (n == 0) throw DataError("dataset has no rows");
  const Eigen::Index yj = ds.col(spec.response);

  std::vector<std::string> covars = spec.covariates;
  if (covars.empty()) {
    for (const auto& c : ds.columns)
      if (c != spec.response) covars.push_back(c);
  }
  for (const auto& c : covars)
    if (c == spec.response)
      throw ConfigError("response column '" + c + "' also listed as covariate");

  Design d;
  const int p = static_cast<int>(covars.size()) + (spec.intercept ? 1 : 0);
  if (p == 0) throw ConfigError("design has no columns (no intercept, no covariates)");
  d.data.X.resize(n, p);
  int at = 0;
  if (spec.intercept) {
    d.data.X.col(0).setOnes();
    d.column_names.push_back("intercept");
    at = 1;
  }
  for (const auto& c : covars) {
    Eigen::VectorXd col = ds.values.col(ds.col(c));
    if (spec.center) col.array() -= col.mean();
    d.data.X.col(at++) = col;
    d.column_names.push_back(c);
  }
  d.data.y = ds.values.col(yj);
  return d;
}

void write_chains_csv(const std::string& path, const std::vector<Chain>& chains) {
  if (chains.empty()) throw DataError("no chains to write");
  const auto& cols = chains.front().columns;
  Eigen::Index rows = 0;
  for (const auto& c : chains) rows += c.draws.rows();
  Eigen::MatrixXd out(rows, 2 + static_cast<Eigen::Index>(cols.size()));
  Eigen::Index at = 0;
  for (const auto& c : chains) {
    for (Eigen::Index i = 0; i < c.draws.rows(); ++i) {
      out(at, 0) = c.chain_id;
      out(at, 1) = static_cast<double>(i);
      out.row(at).tail(cols.size()) = c.draws.row(i);
      ++at;
    }
  }
  std::vector<std::string> header{"chain", "draw"};
  header.insert(header.end(), cols.begin(), cols.end());
  write_csv(path, header, out);
}

std::vector<Chain> read_chains_csv(const std::string& path, Family family,
                                   const SamplerConfig& config) {
  const Dataset ds = read_csv(path);
  if (ds.columns.size() < 3 || ds.columns[0] != "chain" || ds.columns[1] != "draw")
    throw DataError("'" + path + "' is not a chain file (expected chain,draw,...)");
  std::vector<std::string> cols(ds.columns.begin() + 2, ds.columns.end());

  std::vector<int> ids;
  for (Eigen::Index i = 0; i < ds.values.rows(); ++i) {
    const int id = static_cast<int>(ds.values(i, 0));
    if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
  }
  std::vector<Chain> chains;
  for (int id : ids) {
    Chain c;
    c.family = family;
    c.columns = cols;
    c.config = config;
    c.chain_id = id;
    std::vector<Eigen::Index> rows;
    for (Eigen::Index i = 0; i < ds.values.rows(); ++i)
      if (static_cast<int>(ds.values(i, 0)) == id) rows.push_back(i);
    c.draws.resize(static_cast<Eigen::Index>(rows.size()),
                   static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < rows.size(); ++k)
      c.draws.row(static_cast<Eigen::Index>(k)) =
          ds.values.row(rows[k]).tail(cols.size());
    chains.push_back(std::move(c));
  }
  return chains;
}

}  // namespace csmsn
