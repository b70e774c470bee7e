#include <doctest.h>

#include <random>
#include <sstream>

#include "netboot/error.hpp"
#include "netboot/io.hpp"
#include "oracles.hpp"

using namespace netboot;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::invalid_argument;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("edge lists") {
  std::istringstream in("# comment\n1 2\n\n2 3 0.5\n");
  const io::EdgeList list = io::read_edge_list(in);
  CHECK(list.node_count == 3);
  CHECK(list.has_weights);
  REQUIRE(list.edges.size() == 2);
  CHECK(list.edges[0] == Edge{0, 1, 1.0});
  CHECK(list.edges[1] == Edge{1, 2, 0.5});

  std::mt19937_64 rng(3);
  const Network net = oracle::random_graph(25, 0.2, rng, true);
  std::ostringstream out;
  io::write_edge_list(out, net);
  std::istringstream back(out.str());
  const io::EdgeList again = io::read_edge_list(back);
  CHECK(std::equal(again.edges.begin(), again.edges.end(), net.edges().begin(), net.edges().end()));

  const auto parse = [](const char* text) {
    return [text] {
      std::istringstream s(text);
      io::read_edge_list(s);
    };
  };
  CHECK(code_of(parse("1\n")) == ErrorCode::malformed_file);
  CHECK(code_of(parse("1 x\n")) == ErrorCode::malformed_file);
  CHECK(code_of(parse("1 2 0.5 7\n")) == ErrorCode::malformed_file);
  CHECK(code_of(parse("0 2\n")) == ErrorCode::index_out_of_range);
  CHECK(code_of([] { io::read_edge_list(std::filesystem::path("/nonexistent/e.txt")); }) ==
        ErrorCode::io_error);
}

TEST_CASE("csv matrices") {
  std::istringstream in("a,b\n1, 2\n3,4.5\n");
  const Eigen::MatrixXd m = io::read_csv_matrix(in, true);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m(1, 1) == 4.5);
  std::ostringstream out;
  Eigen::MatrixXd x(2, 1);
  x << 0.1, 1.0 / 3.0;
  io::write_csv_matrix(out, x);
  std::istringstream back(out.str());
  CHECK(io::read_csv_matrix(back, false) == x);

  const auto parse = [](const char* text) {
    return [text] {
      std::istringstream s(text);
      io::read_csv_matrix(s, false);
    };
  };
  CHECK(code_of(parse("1,2\n3\n")) == ErrorCode::malformed_file);
  CHECK(code_of(parse("")) == ErrorCode::malformed_file);
  CHECK(code_of(parse("1,,2\n")) == ErrorCode::malformed_file);
  CHECK(code_of(parse("1,inf\n")) == ErrorCode::malformed_file);
}

TEST_CASE("distance matrix round trip") {
  const Network net = Network::build(
      5, {{0, 1, 0.3}, {1, 2, 0.7}, {3, 4, 1.0}}, WeightMode::intensity);
  const DistanceMatrix d = distance_matrix(net);
  std::ostringstream out;
  io::write_distance_matrix(out, d);
  CHECK(out.str().find("inf") != std::string::npos);
  std::istringstream back(out.str());
  const DistanceMatrix again = io::read_distance_matrix(back);
  REQUIRE(again.size() == d.size());
  CHECK(std::equal(again.data().begin(), again.data().end(), d.data().begin()));

  std::istringstream ragged("0 1\n1\n");
  CHECK(code_of([&] { io::read_distance_matrix(ragged); }) == ErrorCode::malformed_file);
  std::istringstream wide("0 1\n");
  CHECK(code_of([&] { io::read_distance_matrix(wide); }) == ErrorCode::malformed_file);
}

TEST_CASE("value lists") {
  std::istringstream in("1.5\n# x\n-2\n");
  CHECK(io::read_values(in) == std::vector<double>{1.5, -2.0});
  std::istringstream bad("1 2\n");
  CHECK(code_of([&] { io::read_values(bad); }) == ErrorCode::malformed_file);
}

}  // TEST_SUITE
