#include "seedkit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace seedkit {

namespace {

std::vector<std::string> split_fields(const std::string& line, char delim) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, delim)) out.push_back(field);
  if (!line.empty() && line.back() == delim) out.emplace_back();
  return out;
}

[[noreturn]] void parse_fail(std::size_t row, std::size_t col, const std::string& what) {
  throw std::runtime_error("csv parse error at row " + std::to_string(row) +
                           " column " + std::to_string(col) + ": " + what);
}

}  // namespace

PointSet parse_csv(const std::string& text, const CsvOptions& options) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;   // 1-based over non-empty data lines
  bool skipped_header = false;
  std::size_t arity = 0;

  const auto dropped = [&](std::size_t col) {
    return std::find(options.drop_columns.begin(), options.drop_columns.end(),
                     Index(col)) != options.drop_columns.end();
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (options.header && !skipped_header) {
      skipped_header = true;
      continue;
    }
    ++lineno;
    const auto fields = split_fields(line, options.delimiter);
    if (arity == 0) {
      arity = fields.size();
    } else if (fields.size() != arity) {
      parse_fail(lineno, fields.size(),
                 "ragged row (expected " + std::to_string(arity) + " fields, got " +
                     std::to_string(fields.size()) + ")");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (dropped(c)) continue;
      const std::string& f = fields[c];
      const char* begin = f.c_str();
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      // The whole token must be consumed (modulo surrounding blanks).
      const char* p = end;
      while (p && *p == ' ') ++p;
      if (end == begin || (p && *p != '\0')) parse_fail(lineno, c + 1, "not a number: '" + f + "'");
      if (!std::isfinite(v)) parse_fail(lineno, c + 1, "non-finite value");
      row.push_back(v);
    }
    if (row.empty()) parse_fail(lineno, 1, "no numeric columns left after exclusions");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::runtime_error("csv parse error: no data rows");

  Matrix m(Index(rows.size()), Index(rows[0].size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[std::size_t(i)][std::size_t(j)];
  return PointSet(std::move(m));
}

PointSet load_csv(const std::string& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

std::string to_csv(const PointSet& ps) {
  std::ostringstream out;
  char buf[40];
  for (Index i = 0; i < ps.n(); ++i) {
    for (Index j = 0; j < ps.d(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", ps.points(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

PointSet minmax_normalize(const PointSet& ps) {
  if (ps.n() < 1) throw std::invalid_argument("minmax_normalize: empty point set");
  Matrix out(ps.n(), ps.d());
  for (Index c = 0; c < ps.d(); ++c) {
    const double lo = ps.points.col(c).minCoeff();
    const double hi = ps.points.col(c).maxCoeff();
    const double range = hi - lo;
    if (range == 0.0) {
      out.col(c).setZero();
    } else {
      out.col(c) = (ps.points.col(c).array() - lo) / range;
    }
  }
  return PointSet(std::move(out));
}

std::vector<Index> knn(const PointSet& ps, Index i, Index L) {
  const Index n = ps.n();
  if (i < 0 || i >= n) throw std::invalid_argument("knn: point index out of range");
  if (L < 1 || L > n - 1) throw std::invalid_argument("knn: L out of range");

  std::vector<std::pair<double, Index>> dist;
  dist.reserve(std::size_t(n - 1));
  for (Index j = 0; j < n; ++j) {
    if (j == i) continue;
    dist.emplace_back((ps.points.row(j) - ps.points.row(i)).squaredNorm(), j);
  }
  std::partial_sort(dist.begin(), dist.begin() + L, dist.end());
  std::vector<Index> out(static_cast<std::size_t>(L));
  for (Index k = 0; k < L; ++k) out[std::size_t(k)] = dist[std::size_t(k)].second;
  return out;
}

}  // namespace seedkit
