// hampack: pack edge-disjoint Hamilton cycles into random graphs.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hampack/error.hpp"
#include "hampack/graph.hpp"
#include "hampack/harness.hpp"
#include "hampack/pipeline.hpp"
#include "hampack/random_graph.hpp"
#include "hampack/report.hpp"

namespace {

using namespace hampack;

constexpr int kExitFull = 0;
constexpr int kExitUsage = 1;
constexpr int kExitPartial = 2;
constexpr int kExitFailed = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  if (path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << data;
}

Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open '" + path + "'");
  return read_edge_list(in);
}

void save_graph(const std::string& path, const Graph& g) {
  std::ostringstream ss;
  write_edge_list(ss, g);
  write_file(path, ss.str());
}

// "0.01", "2logn" or "logn"; n is needed for the log form.
double parse_p(const std::string& text, std::int64_t n) {
  return parse_grid(std::to_string(n) + ":" + text).front().p;
}

int exit_for(Outcome o) {
  switch (o) {
    case Outcome::full:
      return kExitFull;
    case Outcome::partial:
      return kExitPartial;
    case Outcome::failed:
      return kExitFailed;
  }
  return kExitFailed;
}

PackingConfig load_config(const std::string& path) {
  return path.empty() ? default_config() : parse_config(slurp(path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pack edge-disjoint Hamilton cycles into G(n,p)"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Sample G(n,p) and write it as an edge list");
  std::int64_t gen_n = 0;
  std::string gen_p;
  Seed gen_seed = 1;
  std::string gen_out = "-";
  gen->add_option("--n", gen_n, "vertex count")->required()->check(CLI::PositiveNumber);
  gen->add_option("--p", gen_p, "edge probability, a number or '<c>logn'")->required();
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_option("--out", gen_out, "output file ('-' for stdout)");

  auto* pk = app.add_subcommand("pack", "Pack Hamilton cycles and write a report");
  std::int64_t pk_n = 0;
  std::string pk_p, pk_graph, pk_graph_out, pk_config, pk_out = "-", pk_format = "json";
  std::optional<Seed> pk_seed;
  bool pk_no_timing = false;
  pk->add_option("--n", pk_n, "vertex count (ignored with --graph)");
  pk->add_option("--p", pk_p, "edge probability, a number or '<c>logn'")->required();
  pk->add_option("--graph", pk_graph, "pack this edge list instead of sampling");
  pk->add_option("--graph-out", pk_graph_out, "write the packed graph here");
  pk->add_option("--seed", pk_seed, "master seed (overrides the config file)");
  pk->add_option("--config", pk_config, "key = value configuration file");
  pk->add_option("--out", pk_out, "report file ('-' for stdout)");
  pk->add_option("--format", pk_format, "report format")->check(CLI::IsMember({"json", "text"}));
  pk->add_flag("--no-timing", pk_no_timing, "omit wall-clock timing for byte-stable reports");

  auto* vf = app.add_subcommand("verify", "Check a report's cycles against a graph");
  std::string vf_graph, vf_report;
  vf->add_option("--graph", vf_graph, "edge list")->required();
  vf->add_option("--report", vf_report, "report file (json or text)")->required();

  auto* ex = app.add_subcommand("experiment", "Run seeded trials over a grid of (n,p)");
  std::string ex_grid, ex_config, ex_out = "-";
  std::size_t ex_trials = 10, ex_threads = 0;
  std::optional<Seed> ex_seed;
  bool ex_no_timing = false;
  ex->add_option("--grid", ex_grid, "e.g. 2000:2logn,1000:0.01")->required();
  ex->add_option("--trials", ex_trials, "trials per grid point");
  ex->add_option("--seed", ex_seed, "master seed (overrides the config file)");
  ex->add_option("--config", ex_config, "key = value configuration file");
  ex->add_option("--threads", ex_threads, "worker threads (0 = all cores)");
  ex->add_option("--out", ex_out, "aggregate file ('-' for stdout)");
  ex->add_flag("--no-timing", ex_no_timing, "omit wall-clock timing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      save_graph(gen_out, gen_gnp(static_cast<Vertex>(gen_n), parse_p(gen_p, gen_n), gen_seed));
      return 0;
    }
    if (*pk) {
      PackingConfig cfg = load_config(pk_config);
      if (pk_seed) cfg.seed = *pk_seed;
      if (pk_no_timing) cfg.record_timing = false;
      PackingReport report;
      Graph g;
      if (!pk_graph.empty()) {
        g = load_graph(pk_graph);
        report = pack_graph(g, parse_p(pk_p, g.vertex_count()), cfg);
      } else {
        if (pk_n < 1) throw InvalidArgument("pack: --n or --graph is required");
        auto res = pack_with_graph(static_cast<Vertex>(pk_n), parse_p(pk_p, pk_n), cfg);
        report = std::move(res.report);
        g = std::move(res.graph);
      }
      if (report.outcome == Outcome::full && !verify_packing(g, report.cycles).pass) {
        std::cerr << "hampack: internal error: full report failed verification\n";
        return kExitFailed;
      }
      if (!pk_graph_out.empty()) save_graph(pk_graph_out, g);
      const auto fmt = pk_format == "text" ? ReportFormat::text : ReportFormat::json;
      write_file(pk_out, serialize_report(report, fmt));
      std::cerr << "outcome " << outcome_name(report.outcome) << ": " << report.cycles.size()
                << "/" << report.k_target << " cycles\n";
      return exit_for(report.outcome);
    }
    if (*vf) {
      const Graph g = load_graph(vf_graph);
      const std::string text = slurp(vf_report);
      const auto first = text.find_first_not_of(" \t\r\n");
      const auto fmt =
          first != std::string::npos && text[first] == '{' ? ReportFormat::json : ReportFormat::text;
      const PackingReport r = parse_report(text, fmt);
      VerificationResult v = verify_packing(g, r.cycles);
      if (r.n != g.vertex_count()) {
        v.pass = false;
        v.failures.push_back("report n " + std::to_string(r.n) + " differs from graph n " +
                             std::to_string(g.vertex_count()));
      }
      const auto delta = static_cast<std::int64_t>(g.vertex_count() ? g.min_degree() : 0);
      if (r.outcome == Outcome::full &&
          (r.k_target != delta / 2 || static_cast<std::int64_t>(r.cycles.size()) != r.k_target)) {
        v.pass = false;
        v.failures.push_back("outcome full with " + std::to_string(r.cycles.size()) +
                             " cycles, expected floor(delta/2) = " + std::to_string(delta / 2));
      }
      for (const auto& f : v.failures) std::cout << "FAIL " << f << '\n';
      std::cout << (v.pass ? "PASS" : "FAIL") << ' ' << r.cycles.size() << " cycles\n";
      return v.pass ? 0 : kExitFailed;
    }
    if (*ex) {
      PackingConfig cfg = load_config(ex_config);
      if (ex_seed) cfg.seed = *ex_seed;
      if (ex_no_timing) cfg.record_timing = false;
      ExperimentOptions opts;
      opts.threads = ex_threads;
      const auto agg = run_experiment(parse_grid(ex_grid), ex_trials, cfg, opts);
      write_file(ex_out, experiment_to_json(agg));
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "hampack: config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "hampack: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
