#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "netboot/block_bootstrap.hpp"
#include "netboot/covariance.hpp"
#include "netboot/dgp.hpp"
#include "netboot/diagnostics.hpp"
#include "netboot/error.hpp"
#include "netboot/graph.hpp"
#include "netboot/inference.hpp"
#include "netboot/wild_bootstrap.hpp"

namespace py = pybind11;
using namespace netboot;

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

DistanceMatrix to_distances(const RowMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::dimension_mismatch, "distance matrix must be square");
  const auto n = static_cast<std::size_t>(m.rows());
  return DistanceMatrix(n, std::vector<double>(m.data(), m.data() + n * n));
}

RowMatrix from_distances(const DistanceMatrix& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  RowMatrix out(n, n);
  std::copy(d.data().begin(), d.data().end(), out.data());
  return out;
}

py::dict run_to_dict(const BootstrapRun& run) {
  py::dict out;
  out["scheme"] = std::string(to_string(run.scheme));
  out["n"] = run.n;
  out["radius"] = run.radius;
  out["t1"] = run.t1;
  out["sigma_star"] = run.sigma_star;
  out["center"] = run.center;
  out["sample_mean"] = run.sample_mean;
  if (run.t2) {
    out["t2"] = *run.t2;
    out["phi_sample_mean"] = *run.phi_sample_mean;
    out["delta_method_variance"] = *run.delta_method_variance;
  }
  if (run.block_count) {
    out["block_count"] = *run.block_count;
    out["mean_block_size"] = *run.mean_block_size;
    out["variance_factor"] = *run.variance_factor;
  }
  return out;
}

DgpSpec make_spec(const std::string& network, std::size_t n, const std::string& process,
                  std::uint64_t seed, double q, double lam, double p, double value) {
  DgpSpec spec;
  spec.network = {parse_network_kind(network), n, p};
  spec.process.kind = parse_process_kind(process);
  spec.process.q = q;
  spec.process.lambda = lam;
  spec.process.value = value;
  spec.seed = seed;
  return spec;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "netboot core";

  static py::exception<Error> exc(m, "NetbootError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def(
      "distances",
      [](std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
         bool intensity, unsigned threads) {
        std::vector<Edge> list;
        for (const auto& [u, v, w] : edges) list.push_back({u, v, w});
        const Network net =
            Network::build(n, std::move(list), intensity ? WeightMode::intensity : WeightMode::unit);
        return from_distances(distance_matrix(net, threads));
      },
      py::arg("n"), py::arg("edges"), py::arg("intensity") = false, py::arg("threads") = 0,
      "Shortest path lengths for 0-based (u, v, w) edges; inf for disconnected pairs.");

  m.def(
      "denseness",
      [](const RowMatrix& d, double s, double k) {
        const DistanceMatrix dist = to_distances(d);
        const DensenessReport r = denseness(dist, s, k);
        py::dict out;
        out["delta"] = average_neighborhood_size(dist, s);
        out["delta_k"] = r.delta;
        out["delta_boundary"] = r.delta_boundary;
        out["D"] = r.d_max;
        out["D_boundary"] = r.d_max_boundary;
        out["Delta"] = r.delta_central;
        return out;
      },
      py::arg("d"), py::arg("s"), py::arg("k") = 1.0);

  m.def(
      "overlap_weights",
      [](const RowMatrix& d, double radius) { return overlap_weights(to_distances(d), radius); },
      py::arg("d"), py::arg("radius"));

  m.def(
      "hac",
      [](const Eigen::MatrixXd& y, const RowMatrix& d, const std::string& kernel, double bandwidth) {
        return hac_estimate(y, to_distances(d), Kernel{parse_kernel(kernel)}, bandwidth);
      },
      py::arg("y"), py::arg("d"), py::arg("kernel") = "bartlett", py::arg("bandwidth"));

  m.def(
      "psd_repair",
      [](const Eigen::MatrixXd& a, std::optional<double> c) {
        return psd_repair(a, c.value_or(default_repair_floor(a)));
      },
      py::arg("m"), py::arg("c") = py::none());

  m.def(
      "dwb_variance",
      [](const Eigen::MatrixXd& y, const RowMatrix& d, double radius) {
        return dwb_variance(y, overlap_weights(to_distances(d), radius));
      },
      py::arg("y"), py::arg("d"), py::arg("radius"));

  m.def(
      "bootstrap",
      [](const std::string& scheme, const Eigen::MatrixXd& y, const RowMatrix& d, double radius,
         std::size_t reps, std::uint64_t seed, unsigned threads, std::optional<std::string> phi) {
        BootstrapOptions opts;
        opts.replicates = reps;
        opts.seed = seed;
        opts.threads = threads;
        if (phi) opts.phi = parse_smooth_function(*phi, static_cast<std::size_t>(y.cols()));
        const DistanceMatrix dist = to_distances(d);
        const BootstrapRun run = parse_scheme(scheme) == Scheme::dwb
                                     ? dwb_run(y, dist, radius, opts)
                                     : bb_run(y, dist, radius, opts);
        return run_to_dict(run);
      },
      py::arg("scheme"), py::arg("y"), py::arg("d"), py::arg("radius"), py::arg("reps") = 999,
      py::arg("seed"), py::arg("threads") = 1, py::arg("phi") = py::none());

  m.def(
      "quantile",
      [](const std::vector<double>& values, double alpha) {
        return empirical_quantile(values, alpha);
      },
      py::arg("values"), py::arg("alpha"));

  m.def("dependence_transform_rate", &dependence_transform_rate, py::arg("p"), py::arg("tau"),
        py::arg("c4_zero"));

  m.def(
      "diagnostics",
      [](const RowMatrix& d, double radius, const std::vector<double>& gamma, double r, double p,
         const std::string& tail, std::optional<double> w3) {
        std::vector<std::pair<std::size_t, double>> entries;
        for (std::size_t s = 0; s < gamma.size(); ++s) entries.emplace_back(s, gamma[s]);
        DiagnosticsOptions opts;
        opts.weight_norm3 = w3;
        const DiagnosticsReport rep = diagnostics(
            to_distances(d), radius, make_gamma_profile(entries, parse_tail_policy(tail)), r, p, opts);
        py::dict out;
        out["lln_condition"] = rep.lln_condition;
        out["bb1_a"] = rep.bb1_a;
        out["bb1_b"] = rep.bb1_b;
        out["bb1_c"] = rep.bb1_c;
        out["bb2_a"] = rep.bb2_a;
        out["bb2_b"] = rep.bb2_b;
        out["bb4"] = rep.bb4;
        out["dwb2_a"] = rep.dwb2_a;
        out["dwb2_b"] = rep.dwb2_b;
        out["dwb_third_moment"] = rep.dwb_third_moment;
        return out;
      },
      py::arg("d"), py::arg("radius"), py::arg("gamma"), py::arg("r"), py::arg("p"),
      py::arg("tail") = "error", py::arg("w3") = py::none());

  m.def(
      "simulate",
      [](const std::string& network, std::size_t n, const std::string& process, std::uint64_t seed,
         std::uint64_t rep, double q, double lam, double p, double value) {
        const Simulator sim(make_spec(network, n, process, seed, q, lam, p, value));
        py::dict out;
        out["y"] = sim.draw(rep);
        out["distances"] = from_distances(sim.distances());
        out["true_mean"] = sim.true_mean();
        out["true_variance"] = sim.true_variance();
        out["gamma"] = sim.gamma_series();
        return out;
      },
      py::arg("network"), py::arg("n"), py::arg("process"), py::arg("seed"), py::arg("rep") = 0,
      py::arg("q") = 0.0, py::arg("lam") = 0.0, py::arg("p") = 0.0, py::arg("value") = 0.0);

  m.def(
      "coverage",
      [](const std::string& network, std::size_t n, const std::string& process, std::uint64_t seed,
         const std::string& scheme, double radius, std::size_t reps, double alpha,
         std::size_t mc_reps, double q, double lam, double p, unsigned threads) {
        CoverageOptions opts;
        opts.scheme = parse_scheme(scheme);
        opts.radius = radius;
        opts.replicates = reps;
        opts.alpha = alpha;
        opts.mc_reps = mc_reps;
        opts.threads = threads;
        const CoverageReport rep =
            run_coverage(make_spec(network, n, process, seed, q, lam, p, 0.0), opts);
        py::dict out;
        out["coverage"] = rep.coverage;
        out["standard_error"] = rep.standard_error;
        out["mean_sigma_star"] = rep.mean_sigma_star;
        out["true_variance"] = rep.true_variance;
        return out;
      },
      py::arg("network"), py::arg("n"), py::arg("process"), py::arg("seed"),
      py::arg("scheme") = "dwb", py::arg("radius") = 1.0, py::arg("reps") = 399,
      py::arg("alpha") = 0.1, py::arg("mc_reps") = 100, py::arg("q") = 0.0, py::arg("lam") = 0.0,
      py::arg("p") = 0.0, py::arg("threads") = 0);
}
