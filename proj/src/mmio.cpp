#include "orbitprod/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "orbitprod/errors.hpp"

namespace orbitprod {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '%';
}

}  // namespace

GraphModel read_precision(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty Matrix Market stream");
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket" || lower(object) != "matrix" ||
      lower(format) != "coordinate" || lower(field) != "real" ||
      lower(symmetry) != "symmetric") {
    throw ParseError("expected '%%MatrixMarket matrix coordinate real symmetric', got '" +
                     line + "'");
  }
  while (std::getline(in, line) && skippable(line)) {
  }
  std::istringstream size_line(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(size_line >> rows >> cols >> nnz) || rows != cols || rows < 0 || nnz < 0) {
    throw ParseError("bad size line '" + line + "'");
  }
  const int n = static_cast<int>(rows);
  std::vector<double> diag(n, 0.0);
  std::vector<bool> has_diag(n, false);
  std::vector<WeightedEdge> edges;
  long read = 0;
  while (read < nnz && std::getline(in, line)) {
    if (skippable(line)) continue;
    std::istringstream entry(line);
    long i = 0, j = 0;
    double v = 0.0;
    if (!(entry >> i >> j >> v)) throw ParseError("bad entry line '" + line + "'");
    if (i < 1 || j < 1 || i > n || j > n) {
      throw ParseError("entry index out of range in '" + line + "'");
    }
    ++read;
    if (i == j) {
      if (has_diag[i - 1]) throw ParseError("duplicate diagonal entry " + std::to_string(i));
      has_diag[i - 1] = true;
      diag[i - 1] = v;
    } else if (v != 0.0) {
      edges.push_back({static_cast<int>(i - 1), static_cast<int>(j - 1), v});
    }
  }
  if (read != nnz) throw ParseError("stream ended after " + std::to_string(read) +
                                    " of " + std::to_string(nnz) + " entries");
  for (int i = 0; i < n; ++i) {
    if (!has_diag[i]) {
      throw InvalidModel("missing diagonal entry for row " + std::to_string(i + 1));
    }
  }
  return GraphModel(n, std::move(diag), std::move(edges));
}

GraphModel read_precision_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_precision(in);
}

void write_precision(std::ostream& out, const GraphModel& model) {
  const int n = model.size();
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << n << ' ' << n << ' ' << n + model.edge_count() << '\n';
  // Lower triangle: entry (j, i) for stored edge i < j, grouped by row j.
  std::vector<std::vector<std::pair<int, double>>> by_row(n);
  for (const auto& e : model.edges()) by_row[e.j].emplace_back(e.i, e.value);
  for (int row = 0; row < n; ++row) {
    out << row + 1 << ' ' << row + 1 << ' ' << format_real(model.diag()[row]) << '\n';
    for (const auto& [col, v] : by_row[row]) {
      out << row + 1 << ' ' << col + 1 << ' ' << format_real(v) << '\n';
    }
  }
}

void write_precision_file(const std::string& path, const GraphModel& model) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_precision(out, model);
}

std::vector<double> read_vector(std::istream& in) {
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '%' || line[pos] == '#') continue;
    std::istringstream entry(line);
    double v = 0.0;
    if (!(entry >> v)) throw ParseError("bad vector line '" + line + "'");
    values.push_back(v);
  }
  return values;
}

std::vector<double> read_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_vector(in);
}

void write_vector(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) out << format_real(v) << '\n';
}

void write_vector_file(const std::string& path, const std::vector<double>& values) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write '" + path + "'");
  write_vector(out, values);
}

void write_general(std::ostream& out, const SparseMatrix& m,
                   const std::string& comment) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  std::istringstream lines(comment);
  std::string line;
  while (std::getline(lines, line)) out << "% " << line << '\n';
  out << m.rows() << ' ' << m.cols() << ' ' << m.nonZeros() << '\n';
  for (Eigen::Index row = 0; row < m.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(m, row); it; ++it) {
      out << row + 1 << ' ' << it.col() + 1 << ' ' << format_real(it.value()) << '\n';
    }
  }
}

}  // namespace orbitprod
