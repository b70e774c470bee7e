#include "netboot/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "netboot/block_bootstrap.hpp"
#include "netboot/covariance.hpp"
#include "netboot/dgp.hpp"
#include "netboot/diagnostics.hpp"
#include "netboot/error.hpp"
#include "netboot/graph.hpp"
#include "netboot/inference.hpp"
#include "netboot/io.hpp"
#include "netboot/wild_bootstrap.hpp"

namespace netboot {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct GraphArgs {
  std::string edges;
  std::optional<std::size_t> nodes;
  std::optional<std::string> weights;
};

void add_graph_options(CLI::App* cmd, GraphArgs& g) {
  cmd->add_option("--edges", g.edges, "edge list, 1-based `i j [w]` lines")->required();
  cmd->add_option("--nodes", g.nodes, "node count (default: largest index in the edge list)");
  cmd->add_option("--weights", g.weights, "unit | intensity (lengths are 1/w)");
}

Network load_graph(const GraphArgs& g) {
  std::optional<WeightMode> mode;
  if (g.weights) {
    if (*g.weights == "unit") mode = WeightMode::unit;
    else if (*g.weights == "intensity") mode = WeightMode::intensity;
    else throw Error(ErrorCode::invalid_argument, "--weights must be unit or intensity");
  }
  return io::load_network(g.edges, g.nodes, mode);
}

json matrix_json(const Eigen::MatrixXd& m) {
  json flat = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) flat.push_back(m(i, j));
  }
  return flat;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (double x : v) out.push_back(x);
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::io_error, "cannot write '" + path + "'");
  return f;
}

void emit(const json& doc, const std::string& output, std::ostream& out) {
  if (output.empty()) {
    out << doc.dump(2) << '\n';
  } else {
    auto f = open_output(output);
    f << doc.dump(2) << '\n';
  }
}

void check_alphas(const std::vector<double>& alphas) {
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorCode::invalid_argument, "alpha must lie in (0, 1)");
  }
}

json summary_moments(const std::vector<double>& x) {
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  json out;
  out["mean"] = mean;
  out["variance"] = var;
  out["min"] = *std::min_element(x.begin(), x.end());
  out["max"] = *std::max_element(x.begin(), x.end());
  return out;
}

json bootstrap_json(const BootstrapRun& run, const std::vector<double>& alphas) {
  json doc;
  doc["scheme"] = std::string(to_string(run.scheme));
  doc["n"] = run.n;
  doc["v"] = run.v;
  doc["radius"] = run.radius;
  doc["replicates"] = run.replicates;
  doc["seed"] = run.seed;
  doc["sample_mean"] = vector_json(run.sample_mean);
  doc["center"] = vector_json(run.center);
  doc["sigma_star"] = matrix_json(run.sigma_star);
  if (run.block_count) {
    doc["block_count"] = *run.block_count;
    doc["mean_block_size"] = *run.mean_block_size;
    doc["mean_pseudo_sample_ratio"] = *run.mean_pseudo_sample_ratio;
    doc["variance_factor"] = *run.variance_factor;
  }
  doc["t1_summary"] = summary_moments(run.t1);
  if (run.t2) {
    doc["phi"] = *run.phi_name;
    doc["phi_sample_mean"] = *run.phi_sample_mean;
    doc["delta_method_variance"] = *run.delta_method_variance;
    doc["t2_summary"] = summary_moments(*run.t2);
  }
  json levels = json::array();
  for (double a : alphas) {
    json lv;
    lv["alpha"] = a;
    lv["t1_quantile"] = empirical_quantile(run.t1, 1.0 - a);
    lv["ball_radius"] = confidence_ball(run, a).radius;
    if (run.t2) {
      const ConfidenceInterval ci = confidence_interval(run, a);
      lv["phi_interval"] = json::array({ci.lower, ci.upper});
    }
    levels.push_back(lv);
  }
  doc["levels"] = levels;
  return doc;
}

DgpSpec parse_dgp(const json& cfg, std::uint64_t seed) {
  DgpSpec spec;
  spec.seed = seed;
  const json& net = cfg.at("network");
  spec.network.kind = parse_network_kind(net.at("kind").get<std::string>());
  spec.network.n = net.at("n").get<std::size_t>();
  spec.network.edge_probability = net.value("p", 0.0);
  const json& proc = cfg.at("process");
  spec.process.kind = parse_process_kind(proc.at("kind").get<std::string>());
  spec.process.q = proc.value("q", 0.0);
  spec.process.lambda = proc.value("lambda", 0.0);
  spec.process.value = proc.value("value", 0.0);
  return spec;
}

json read_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::io_error, "cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::malformed_file, path + ": " + e.what());
  }
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed) {
  if (!seed) throw Error(ErrorCode::missing_seed, "--seed is required for this subcommand");
  return *seed;
}

void check_reps(std::size_t reps) {
  if (reps == 0) throw Error(ErrorCode::invalid_argument, "reps must be ≥ 1");
}

void report_error(std::ostream& err, std::string_view code, const std::string& message) {
  json e;
  e["error"] = std::string(code);
  e["message"] = message;
  err << e.dump() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Network-dependent bootstrap inference", "netboot"};
  app.require_subcommand(1);

  std::string output;
  unsigned threads = 0;
  GraphArgs graph;
  std::string data_path;
  bool header = false;
  std::optional<std::uint64_t> seed;
  std::vector<double> alphas{0.1, 0.05, 0.01};

  auto common_output = [&](CLI::App* cmd) {
    cmd->add_option("--output", output, "write the result here instead of stdout");
  };
  auto common_threads = [&](CLI::App* cmd) {
    cmd->add_option("--threads", threads, "worker threads, 0 = all cores");
  };
  auto common_data = [&](CLI::App* cmd) {
    cmd->add_option("--data", data_path, "CSV data matrix, n rows by v columns")->required();
    cmd->add_flag("--header", header, "skip one header line in the data file");
  };

  // distances
  std::string format = "text";
  auto* distances_cmd = app.add_subcommand("distances", "all-pairs shortest path lengths");
  add_graph_options(distances_cmd, graph);
  distances_cmd->add_option("--format", format, "text | json");
  common_output(distances_cmd);
  common_threads(distances_cmd);

  // denseness
  double s = 1.0, k = 1.0;
  auto* dense_cmd = app.add_subcommand("denseness", "neighbourhood size moments");
  add_graph_options(dense_cmd, graph);
  dense_cmd->add_option("--s", s, "neighbourhood radius s (N(i;s+1))")->required();
  dense_cmd->add_option("--k", k, "moment order");
  common_output(dense_cmd);
  common_threads(dense_cmd);

  // hac
  std::string kernel_name = "bartlett";
  double bandwidth = 0.0;
  bool repair = false;
  std::optional<double> cn;
  auto* hac_cmd = app.add_subcommand("hac", "network HAC variance estimate");
  add_graph_options(hac_cmd, graph);
  common_data(hac_cmd);
  hac_cmd->add_option("--kernel", kernel_name, "truncated | bartlett | parzen");
  hac_cmd->add_option("--bandwidth", bandwidth, "bandwidth b (lag cut at b+1)")->required();
  hac_cmd->add_flag("--repair", repair, "floor the eigenvalues at c_n");
  hac_cmd->add_option("--cn", cn, "repair floor (default 1e-3 trace/v)");
  common_output(hac_cmd);
  common_threads(hac_cmd);

  // bootstrap block | dwb
  double radius = 1.0;
  std::size_t reps = 999;
  std::optional<std::string> phi_spec;
  std::string dump_path, dump_t2_path;
  auto* boot_cmd = app.add_subcommand("bootstrap", "bootstrap law of the mean statistic");
  boot_cmd->require_subcommand(1);
  std::vector<CLI::App*> scheme_cmds;
  for (const char* name : {"block", "dwb"}) {
    auto* cmd = boot_cmd->add_subcommand(name, std::string(name) + " scheme");
    add_graph_options(cmd, graph);
    common_data(cmd);
    cmd->add_option("--radius", radius, "s_n")->required();
    cmd->add_option("--reps", reps, "bootstrap replicates B");
    cmd->add_option("--seed", seed, "root seed");
    cmd->add_option("--phi", phi_spec, "identity | l2norm | poly:<c>@<e1>,..;...");
    cmd->add_option("--alpha", alphas, "significance levels")->delimiter(',');
    cmd->add_option("--dump-replicates", dump_path, "write T1 replicates, one per line");
    cmd->add_option("--dump-t2", dump_t2_path, "write T2 replicates, one per line");
    common_output(cmd);
    common_threads(cmd);
    scheme_cmds.push_back(cmd);
  }

  // diagnose
  std::string gamma_path, tail_name = "error";
  double r_moment = 0.0, p_moment = 0.0;
  std::optional<double> w3;
  auto* diag_cmd = app.add_subcommand("diagnose", "finite-n values of the network conditions");
  add_graph_options(diag_cmd, graph);
  diag_cmd->add_option("--radius", radius, "s_n")->required();
  diag_cmd->add_option("--gamma", gamma_path, "`s gamma_s` per line")->required();
  diag_cmd->add_option("--r", r_moment, "moment exponent r > 2")->required();
  diag_cmd->add_option("--p", p_moment, "moment exponent p > 2")->required();
  diag_cmd->add_option("--tail", tail_name, "error | zero | hold");
  diag_cmd->add_option("--w3", w3, "||W||_3 (default: Gaussian value)");
  common_output(diag_cmd);
  common_threads(diag_cmd);

  // quantiles
  std::string replicates_path;
  std::vector<double> levels{0.9, 0.95, 0.99};
  auto* quant_cmd = app.add_subcommand("quantiles", "empirical quantiles of a replicate dump");
  quant_cmd->add_option("--replicates", replicates_path, "one value per line")->required();
  quant_cmd->add_option("--levels", levels, "probabilities")->delimiter(',');
  common_output(quant_cmd);

  // simulate | coverage
  std::string config_path, records_path, data_out;
  std::uint64_t rep = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "draw one data set from a configured DGP");
  sim_cmd->add_option("--config", config_path, "JSON DGP spec")->required();
  sim_cmd->add_option("--seed", seed, "root seed");
  sim_cmd->add_option("--rep", rep, "Monte Carlo repetition index");
  sim_cmd->add_option("--data-out", data_out, "write the sample as CSV");
  common_output(sim_cmd);
  common_threads(sim_cmd);

  auto* cov_cmd = app.add_subcommand("coverage", "Monte Carlo coverage of the confidence ball");
  cov_cmd->add_option("--config", config_path, "JSON DGP spec plus a `coverage` block")->required();
  cov_cmd->add_option("--seed", seed, "root seed");
  cov_cmd->add_option("--records", records_path, "write per-repetition records as CSV");
  common_output(cov_cmd);
  common_threads(cov_cmd);

  std::vector<const char*> argv{"netboot"};
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ExtrasError& e) {
    report_error(err, to_string(ErrorCode::unknown_flag), e.what());
    return 2;
  } catch (const CLI::ParseError& e) {
    report_error(err, to_string(ErrorCode::invalid_argument), e.what());
    return 2;
  }

  try {
    if (*distances_cmd) {
      const Network net = load_graph(graph);
      const DistanceMatrix d = distance_matrix(net, threads);
      if (format == "text") {
        if (output.empty()) {
          io::write_distance_matrix(out, d);
        } else {
          auto f = open_output(output);
          io::write_distance_matrix(f, d);
        }
      } else if (format == "json") {
        json doc;
        doc["n"] = d.size();
        json rows = json::array();
        for (std::size_t i = 0; i < d.size(); ++i) {
          json row = json::array();
          for (std::size_t j = 0; j < d.size(); ++j) {
            if (DistanceMatrix::is_finite(d(i, j))) row.push_back(d(i, j));
            else row.push_back(nullptr);
          }
          rows.push_back(row);
        }
        doc["distances"] = rows;
        emit(doc, output, out);
      } else {
        throw Error(ErrorCode::invalid_argument, "--format must be text or json");
      }
    } else if (*dense_cmd) {
      const Network net = load_graph(graph);
      const DistanceMatrix d = distance_matrix(net, threads);
      const DensenessReport rep_k = denseness(d, s, k);
      const DensenessReport rep_1 = denseness(d, s, 1.0);
      json doc;
      doc["n"] = d.size();
      doc["s"] = s;
      doc["k"] = k;
      doc["delta"] = rep_1.delta;
      doc["delta_k"] = rep_k.delta;
      doc["delta_boundary"] = rep_1.delta_boundary;
      doc["delta_boundary_k"] = rep_k.delta_boundary;
      doc["D"] = rep_k.d_max;
      doc["D_boundary"] = rep_k.d_max_boundary;
      doc["Delta"] = rep_k.delta_central;
      emit(doc, output, out);
    } else if (*hac_cmd) {
      const Kernel kernel{parse_kernel(kernel_name)};
      const Network net = load_graph(graph);
      const Eigen::MatrixXd y = io::read_csv_matrix(fs::path(data_path), header);
      const DistanceMatrix d = distance_matrix(net, threads);
      const Eigen::MatrixXd raw = hac_estimate(y, d, kernel, bandwidth);
      json doc;
      doc["kernel"] = std::string(to_string(kernel.kind));
      doc["bandwidth"] = bandwidth;
      doc["n"] = static_cast<std::size_t>(y.rows());
      doc["v"] = static_cast<std::size_t>(y.cols());
      doc["min_eigenvalue_raw"] = min_eigenvalue(raw);
      Eigen::MatrixXd result = raw;
      if (repair) {
        const double floor_value = cn.value_or(default_repair_floor(raw));
        result = psd_repair(raw, floor_value);
        doc["cn"] = floor_value;
      }
      doc["repaired"] = repair;
      doc["matrix"] = matrix_json(result);
      doc["min_eigenvalue"] = min_eigenvalue(result);
      emit(doc, output, out);
    } else if (*boot_cmd) {
      const bool dwb = scheme_cmds[1]->parsed();
      check_reps(reps);
      if (!(radius > 0.0)) throw Error(ErrorCode::invalid_argument, "radius must be > 0");
      check_alphas(alphas);
      BootstrapOptions opts;
      opts.replicates = reps;
      opts.seed = require_seed(seed);
      opts.threads = threads;
      const Network net = load_graph(graph);
      const Eigen::MatrixXd y = io::read_csv_matrix(fs::path(data_path), header);
      if (phi_spec) opts.phi = parse_smooth_function(*phi_spec, static_cast<std::size_t>(y.cols()));
      const DistanceMatrix d = distance_matrix(net, threads);
      const BootstrapRun run = dwb ? dwb_run(y, d, radius, opts) : bb_run(y, d, radius, opts);
      if (!dump_path.empty()) {
        auto f = open_output(dump_path);
        io::write_values(f, run.t1);
      }
      if (!dump_t2_path.empty()) {
        if (!run.t2) throw Error(ErrorCode::invalid_argument, "--dump-t2 needs --phi");
        auto f = open_output(dump_t2_path);
        io::write_values(f, *run.t2);
      }
      emit(bootstrap_json(run, alphas), output, out);
    } else if (*diag_cmd) {
      const TailPolicy tail = parse_tail_policy(tail_name);
      const Network net = load_graph(graph);
      std::ifstream gf(gamma_path);
      if (!gf) throw Error(ErrorCode::io_error, "cannot open '" + gamma_path + "'");
      std::vector<std::pair<std::size_t, double>> entries;
      std::string line;
      std::size_t line_no = 0;
      while (std::getline(gf, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        double s_value = 0.0, g_value = 0.0;
        std::string extra;
        if (!(ls >> s_value >> g_value) || (ls >> extra) || s_value < 0.0 ||
            s_value != std::floor(s_value)) {
          throw Error(ErrorCode::malformed_file,
                      gamma_path + ":" + std::to_string(line_no) + ": expected `s gamma_s`");
        }
        entries.emplace_back(static_cast<std::size_t>(s_value), g_value);
      }
      const GammaProfile gamma = make_gamma_profile(entries, tail);
      DiagnosticsOptions opts;
      opts.weight_norm3 = w3;
      opts.threads = threads;
      const DistanceMatrix d = distance_matrix(net, threads);
      const DiagnosticsReport rep_d = diagnostics(d, radius, gamma, r_moment, p_moment, opts);
      json doc;
      doc["n"] = rep_d.n;
      doc["radius"] = rep_d.radius;
      doc["r"] = rep_d.r;
      doc["p"] = rep_d.p;
      doc["lln_condition"] = rep_d.lln_condition;
      doc["bb1_a"] = rep_d.bb1_a;
      doc["bb1_b"] = rep_d.bb1_b;
      doc["bb1_c"] = rep_d.bb1_c;
      doc["bb1_c_by_s"] = rep_d.bb1_c_by_s;
      doc["bb2_a"] = rep_d.bb2_a;
      doc["bb2_b"] = rep_d.bb2_b;
      doc["bb4"] = rep_d.bb4;
      doc["dwb2_a"] = rep_d.dwb2_a;
      doc["dwb2_b"] = rep_d.dwb2_b;
      doc["dwb_third_moment"] = rep_d.dwb_third_moment;
      doc["omega_max_offdiag"] = rep_d.omega_max_offdiag;
      emit(doc, output, out);
    } else if (*quant_cmd) {
      for (double lv : levels) {
        if (!(lv > 0.0 && lv <= 1.0)) {
          throw Error(ErrorCode::invalid_argument, "levels must lie in (0, 1]");
        }
      }
      const std::vector<double> values = io::read_values(fs::path(replicates_path));
      json doc;
      doc["count"] = values.size();
      json qs = json::array();
      for (double lv : levels) {
        json q;
        q["level"] = lv;
        q["value"] = empirical_quantile(values, lv);
        qs.push_back(q);
      }
      doc["quantiles"] = qs;
      emit(doc, output, out);
    } else if (*sim_cmd) {
      const json cfg = read_config(config_path);
      const std::uint64_t root = require_seed(seed);
      DgpSpec spec;
      try {
        spec = parse_dgp(cfg, root);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::malformed_file, config_path + ": " + e.what());
      }
      const Simulator sim(spec, threads);
      const Eigen::MatrixXd y = sim.draw(rep);
      if (!data_out.empty()) {
        auto f = open_output(data_out);
        io::write_csv_matrix(f, y);
      }
      json doc;
      doc["network"] = std::string(to_string(spec.network.kind));
      doc["process"] = std::string(to_string(spec.process.kind));
      doc["n"] = sim.network().node_count();
      doc["edges"] = sim.network().edges().size();
      doc["seed"] = root;
      doc["rep"] = rep;
      doc["true_mean"] = sim.true_mean();
      if (const auto tv = sim.true_variance()) doc["true_variance"] = *tv;
      if (const auto g = sim.gamma_series()) doc["gamma"] = *g;
      doc["sample_mean"] = y.mean();
      if (data_out.empty()) doc["data"] = matrix_json(y);
      emit(doc, output, out);
    } else if (*cov_cmd) {
      const json cfg = read_config(config_path);
      DgpSpec spec;
      CoverageOptions opts;
      try {
        const json cov = cfg.value("coverage", json::object());
        opts.replicates = cov.value("replicates", opts.replicates);
        opts.mc_reps = cov.value("mc_reps", opts.mc_reps);
        opts.alpha = cov.value("alpha", opts.alpha);
        opts.radius = cov.value("radius", opts.radius);
        opts.scheme = parse_scheme(cov.value("scheme", std::string("dwb")));
        check_reps(opts.replicates);
        spec = parse_dgp(cfg, 0);
      } catch (const json::exception& e) {
        throw Error(ErrorCode::malformed_file, config_path + ": " + e.what());
      }
      spec.seed = require_seed(seed);
      opts.threads = threads;
      const CoverageReport report = run_coverage(spec, opts);
      if (!records_path.empty()) {
        auto f = open_output(records_path);
        f << "rep,covered,t1,ball_radius,sigma_star\n";
        char buf[128];
        for (std::size_t i = 0; i < report.records.size(); ++i) {
          const auto& rec = report.records[i];
          std::snprintf(buf, sizeof buf, "%zu,%d,%.17g,%.17g,%.17g\n", i, rec.covered ? 1 : 0,
                        rec.t1, rec.radius, rec.sigma_star);
          f << buf;
        }
      }
      json doc;
      doc["scheme"] = std::string(to_string(opts.scheme));
      doc["network"] = std::string(to_string(spec.network.kind));
      doc["process"] = std::string(to_string(spec.process.kind));
      doc["n"] = spec.network.n;
      doc["radius"] = opts.radius;
      doc["replicates"] = opts.replicates;
      doc["alpha"] = opts.alpha;
      doc["seed"] = spec.seed;
      doc["mc_reps"] = report.mc_reps;
      doc["nominal"] = report.nominal;
      doc["coverage"] = report.coverage;
      doc["standard_error"] = report.standard_error;
      doc["mean_sigma_star"] = report.mean_sigma_star;
      if (report.true_variance) doc["true_variance"] = *report.true_variance;
      doc["mean_ball_radius"] = report.mean_ball_radius;
      emit(doc, output, out);
    }
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.what());
    return 2;
  } catch (const std::exception& e) {
    report_error(err, "internal", e.what());
    return 1;
  }
  return 0;
}

}  // namespace netboot
