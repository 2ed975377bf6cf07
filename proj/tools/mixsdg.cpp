// mixsdg command-line driver.
//
//   mixsdg validate <manifest>
//   mixsdg stats    <manifest> [--k 4] [--exclude-zeros] [--out dir]
//   mixsdg spectra  <manifest> [--pmax --qmin --qmax --kernel] [--out dir]
//   mixsdg graph    <manifest> [... --xi --ridge] [--out dir]
//   mixsdg simulate --kind poisson|thomas|white-noise|linked-pair [...] --seed N --out dir
//   mixsdg run      <manifest> [all flags] [--plots]
//
// Exit codes: 0 success, 2 validation failure, 1 any other error.
// MIXSDG_LOG=quiet|info|debug controls stderr verbosity (default info).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mixsdg/mixsdg.hpp"

namespace {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char* v = std::getenv("MIXSDG_LOG");
  if (!v) return LogLevel::info;
  const std::string s(v);
  if (s == "quiet" || s == "0") return LogLevel::quiet;
  if (s == "debug" || s == "2") return LogLevel::debug;
  return LogLevel::info;
}

void log(LogLevel at, const std::string& msg) {
  if (static_cast<int>(log_level()) >= static_cast<int>(at)) std::cerr << "[mixsdg] " << msg << '\n';
}

void add_grid_flags(CLI::App* cmd, mixsdg::RunConfig& cfg) {
  cmd->add_option("--pmax", cfg.p_max, "largest p frequency index")->capture_default_str();
  cmd->add_option("--qmin", cfg.q_min, "smallest q frequency index")->capture_default_str();
  cmd->add_option("--qmax", cfg.q_max, "largest q frequency index")->capture_default_str();
  cmd->add_option("--kernel", cfg.kernel, "odd smoothing kernel size (cells per axis)")->capture_default_str();
}

void add_graph_flags(CLI::App* cmd, mixsdg::RunConfig& cfg) {
  cmd->add_option("--xi", cfg.xi, "edge threshold on the sup partial strength")->capture_default_str();
  cmd->add_option("--ridge", cfg.ridge, "relative ridge for ill-conditioned spectral matrices")
      ->capture_default_str();
}

void add_stats_flags(CLI::App* cmd, mixsdg::RunConfig& cfg) {
  cmd->add_option("--k", cfg.k, "neighbours for k-NN weights")->capture_default_str();
  cmd->add_flag("--exclude-zeros", cfg.exclude_zeros, "drop zero-valued lattice sites from statistics");
}

mixsdg::HybridDataset load_valid(const mixsdg::RunConfig& cfg) {
  auto ds = mixsdg::run_stage("ingest", [&] { return mixsdg::read_manifest(cfg.manifest); });
  mixsdg::run_stage("validate", [&] { mixsdg::require_valid(ds); });
  log(LogLevel::debug, "loaded " + std::to_string(ds.dimension()) + " components");
  return ds;
}

void print_report(const mixsdg::ValidationReport& r) {
  for (const auto& f : r.findings)
    std::cout << (f.severity == mixsdg::Severity::fatal ? "fatal" : "warning") << '\t'
              << (f.component.empty() ? "-" : f.component) << '\t' << f.message << '\n';
  std::cout << (r.accepted() ? "accepted" : "rejected") << " (" << r.findings.size() << " finding(s))\n";
}

struct SimArgs {
  std::string kind = "poisson";
  double lambda = 500.0;
  double kappa = 25.0;
  double mu = 20.0;
  double sigma = 0.02;
  int g = 16;
  double sigma2 = 1.0;
  double noise = 0.0;
  std::string name = "sim";
};

int run_simulate(const SimArgs& a, const mixsdg::RunConfig& cfg) {
  mixsdg::SimSpec spec;
  spec.seed = cfg.seed;
  spec.window = mixsdg::Window::unit();
  if (a.kind == "poisson") {
    spec.kind = mixsdg::PoissonSpec{a.lambda};
  } else if (a.kind == "thomas") {
    spec.kind = mixsdg::ThomasSpec{a.kappa, a.mu, a.sigma};
  } else if (a.kind == "white-noise") {
    spec.kind = mixsdg::WhiteNoiseSpec{a.g, a.g, a.sigma2};
  } else if (a.kind == "linked-pair") {
    mixsdg::Coupling c;
    if (a.noise > 0.0) c = {mixsdg::Coupling::Kind::noisy_cell_count, a.noise};
    spec.kind = mixsdg::LinkedPairSpec{a.lambda, c, a.g};
  } else {
    throw mixsdg::Error("simulate: unknown kind '" + a.kind + "'");
  }
  mixsdg::HybridDataset ds{spec.window, mixsdg::simulate(spec, a.name)};
  mixsdg::write_dataset(cfg.out / "manifest.json", ds);
  log(LogLevel::info, "wrote " + std::to_string(ds.dimension()) + " component(s) to " + cfg.out.string());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral dependence graphs for mixed point/lattice spatial data"};
  app.require_subcommand(1);
  mixsdg::RunConfig cfg;
  SimArgs sim;

  auto* validate = app.add_subcommand("validate", "check a manifest and its components");
  auto* stats = app.add_subcommand("stats", "nearest-neighbour, Clark-Evans, Moran and Geary summaries");
  auto* spectra = app.add_subcommand("spectra", "smoothed auto/cross periodograms per component pair");
  auto* graph = app.add_subcommand("graph", "sup partial strengths and the thresholded dependence graph");
  auto* simulate = app.add_subcommand("simulate", "write a simulated dataset with its manifest");
  auto* run = app.add_subcommand("run", "full pipeline");

  for (auto* cmd : {validate, stats, spectra, graph, run})
    cmd->add_option("manifest", cfg.manifest, "manifest JSON")->required()->check(CLI::ExistingFile);
  for (auto* cmd : {stats, spectra, graph, simulate, run})
    cmd->add_option("--out", cfg.out, "output directory")->capture_default_str();
  for (auto* cmd : {spectra, graph, run}) add_grid_flags(cmd, cfg);
  for (auto* cmd : {graph, run}) add_graph_flags(cmd, cfg);
  for (auto* cmd : {stats, run}) add_stats_flags(cmd, cfg);
  for (auto* cmd : {simulate, run}) cmd->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
  run->add_flag("--plots", cfg.plots, "also write SVG heatmaps and a graph drawing");

  simulate->add_option("--kind", sim.kind, "poisson | thomas | white-noise | linked-pair")->capture_default_str();
  simulate->add_option("--lambda", sim.lambda, "point intensity on the unit square")->capture_default_str();
  simulate->add_option("--kappa", sim.kappa, "Thomas parent intensity")->capture_default_str();
  simulate->add_option("--mu", sim.mu, "Thomas mean offspring count")->capture_default_str();
  simulate->add_option("--sigma", sim.sigma, "Thomas offspring dispersion")->capture_default_str();
  simulate->add_option("--g", sim.g, "lattice cells per axis")->capture_default_str();
  simulate->add_option("--sigma2", sim.sigma2, "white-noise variance")->capture_default_str();
  simulate->add_option("--noise", sim.noise, "linked-pair additive noise sd")->capture_default_str();
  simulate->add_option("--name", sim.name, "component name (prefix)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*validate) {
      const auto ds = mixsdg::run_stage("ingest", [&] { return mixsdg::read_manifest(cfg.manifest); });
      const auto report = mixsdg::validate(ds);
      print_report(report);
      return report.accepted() ? 0 : 2;
    }
    if (*simulate) return run_simulate(sim, cfg);

    mixsdg::run_stage("config", [&] { cfg.check(); });
    if (*run) {
      const auto res = mixsdg::run_pipeline(cfg);
      const auto& g = res.estimate.graph;
      log(LogLevel::info, "graph: " + std::to_string(g.vertices.size()) + " vertices, " +
                              std::to_string(g.edges.size()) + " edge(s), " + std::to_string(g.isolated().size()) +
                              " isolated");
      log(LogLevel::debug, "wrote " + std::to_string(res.files.size()) + " file(s) to " + cfg.out.string());
      return 0;
    }

    const auto ds = load_valid(cfg);
    mixsdg::ArtifactWriter w(cfg.out);
    try {
      if (*stats) {
        const auto rows = mixsdg::run_stage("stats", [&] { return mixsdg::compute_stats(ds, cfg); });
        w.write("stats.csv", mixsdg::render_stats_csv(rows));
      } else if (*spectra) {
        const auto cube = mixsdg::run_stage("spectra", [&] { return mixsdg::assemble_cube(ds, cfg.graph_options().assemble); });
        w.write("components.csv", mixsdg::render_components_csv(ds));
        mixsdg::write_spectra(w, cube);
      } else if (*graph) {
        const auto est = mixsdg::run_stage("graph", [&] { return mixsdg::estimate_graph(ds, cfg.graph_options()); });
        mixsdg::write_graph(w, est.graph);
        log(LogLevel::info, std::to_string(est.graph.edges.size()) + " edge(s)");
      }
    } catch (...) {
      w.rollback();
      throw;
    }
    return 0;
  } catch (const mixsdg::StageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.validation_failure() ? 2 : 1;
  } catch (const mixsdg::ValidationError& e) {
    std::cerr << "error: validate: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
