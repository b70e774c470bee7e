#pragma once

// Text formats. Edge lists are 1-based `i j [w]` lines; data matrices are
// headerless CSV (n rows, v columns); distance matrices are dense
// whitespace-separated rows using the token `inf` for disconnected pairs.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "netboot/graph.hpp"

namespace netboot::io {

struct EdgeList {
  std::size_t node_count = 0;  // largest index seen
  std::vector<Edge> edges;     // 0-based
  bool has_weights = false;    // any line carried a third column
};

/// Blank lines and lines starting with '#' are skipped.
EdgeList read_edge_list(std::istream& in);
EdgeList read_edge_list(const std::filesystem::path& path);

/// Writes 1-based `i j w` lines.
void write_edge_list(std::ostream& out, const Network& net);

/// Mode defaults to intensity when weights are present, unit otherwise.
Network load_network(const std::filesystem::path& path, std::optional<std::size_t> node_count,
                     std::optional<WeightMode> mode);

Eigen::MatrixXd read_csv_matrix(std::istream& in, bool skip_header);
Eigen::MatrixXd read_csv_matrix(const std::filesystem::path& path, bool skip_header);
void write_csv_matrix(std::ostream& out, const Eigen::MatrixXd& m);

/// Values are written with 17 significant digits so a re-read is exact.
void write_distance_matrix(std::ostream& out, const DistanceMatrix& d);
DistanceMatrix read_distance_matrix(std::istream& in);

std::vector<double> read_values(std::istream& in);
std::vector<double> read_values(const std::filesystem::path& path);
void write_values(std::ostream& out, std::span<const double> values);

}  // namespace netboot::io
