#include "netboot/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "netboot/error.hpp"

namespace netboot::io {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  return in;
}

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::malformed_file, "line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& token, std::size_t line_no) {
  if (token == "inf" || token == "Inf" || token == "INF") return DistanceMatrix::kInfinity;
  try {
    std::size_t used = 0;
    const double x = std::stod(token, &used);
    if (used != token.size()) malformed(line_no, "bad number '" + token + "'");
    return x;
  } catch (const std::logic_error&) {
    malformed(line_no, "bad number '" + token + "'");
  }
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

EdgeList read_edge_list(std::istream& in) {
  EdgeList out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream fields(line);
    std::string a, b, w, extra;
    fields >> a >> b;
    if (b.empty()) malformed(line_no, "expected 'i j [w]'");
    long long i = 0, j = 0;
    try {
      std::size_t ua = 0, ub = 0;
      i = std::stoll(a, &ua);
      j = std::stoll(b, &ub);
      if (ua != a.size() || ub != b.size()) malformed(line_no, "node indices must be integers");
    } catch (const std::logic_error&) {
      malformed(line_no, "node indices must be integers");
    }
    if (i < 1 || j < 1) {
      throw Error(ErrorCode::index_out_of_range,
                  "line " + std::to_string(line_no) + ": node indices are 1-based");
    }
    double weight = 1.0;
    if (fields >> w) {
      weight = parse_double(w, line_no);
      out.has_weights = true;
    }
    if (fields >> extra) malformed(line_no, "too many columns");
    out.edges.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), weight});
    out.node_count = std::max(out.node_count, static_cast<std::size_t>(std::max(i, j)));
  }
  return out;
}

EdgeList read_edge_list(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_edge_list(in);
}

void write_edge_list(std::ostream& out, const Network& net) {
  for (const auto& e : net.edges()) {
    out << e.u + 1 << ' ' << e.v + 1 << ' ' << format_double(e.weight) << '\n';
  }
}

Network load_network(const std::filesystem::path& path, std::optional<std::size_t> node_count,
                     std::optional<WeightMode> mode) {
  auto list = read_edge_list(path);
  std::size_t n = list.node_count;
  if (node_count) {
    if (*node_count < list.node_count) {
      throw Error(ErrorCode::index_out_of_range,
                  "edge list references node " + std::to_string(list.node_count) +
                      " but only " + std::to_string(*node_count) + " nodes were declared");
    }
    n = *node_count;
  }
  const WeightMode m = mode.value_or(list.has_weights ? WeightMode::intensity : WeightMode::unit);
  return Network::build(n, std::move(list.edges), m);
}

Eigen::MatrixXd read_csv_matrix(std::istream& in, bool skip_header) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header_pending = skip_header;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    std::vector<double> row;
    std::stringstream fields(line);
    std::string cell;
    while (std::getline(fields, cell, ',')) {
      const auto first = cell.find_first_not_of(" \t\r");
      const auto last = cell.find_last_not_of(" \t\r");
      if (first == std::string::npos) malformed(line_no, "empty field");
      const double x = parse_double(cell.substr(first, last - first + 1), line_no);
      if (!std::isfinite(x)) malformed(line_no, "data values must be finite");
      row.push_back(x);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      malformed(line_no, "row has " + std::to_string(row.size()) + " columns, expected " +
                             std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error(ErrorCode::malformed_file, "data file has no rows");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path, bool skip_header) {
  auto in = open_input(path);
  return read_csv_matrix(in, skip_header);
}

void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_distance_matrix(std::ostream& out, const DistanceMatrix& d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (j) out << ' ';
      out << format_double(d(i, j));
    }
    out << '\n';
  }
}

DistanceMatrix read_distance_matrix(std::istream& in) {
  std::vector<double> entries;
  std::size_t cols = 0, rows = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream fields(line);
    std::string token;
    std::size_t count = 0;
    while (fields >> token) {
      entries.push_back(parse_double(token, line_no));
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols) malformed(line_no, "ragged distance matrix");
    ++rows;
  }
  if (rows != cols) throw Error(ErrorCode::malformed_file, "distance matrix must be square");
  return DistanceMatrix(rows, std::move(entries));
}

std::vector<double> read_values(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (skippable(line)) continue;
    std::istringstream fields(line);
    std::string token, extra;
    fields >> token;
    if (fields >> extra) malformed(line_no, "expected one value per line");
    values.push_back(parse_double(token, line_no));
  }
  return values;
}

std::vector<double> read_values(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_values(in);
}

void write_values(std::ostream& out, std::span<const double> values) {
  for (double x : values) out << format_double(x) << '\n';
}

}  // namespace netboot::io
