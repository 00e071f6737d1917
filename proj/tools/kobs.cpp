// kobs: batch front end for Hamiltonian ensembles, (T, V) sweeps of IPC and
// Krylov observability, and the derived grid analyses.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kobs/experiments.hpp"
#include "kobs/serialize.hpp"
#include "kobs/text.hpp"

namespace fs = std::filesystem;

namespace {

// Flags shared by the ensemble subcommands. Values given on the command line
// are applied first, the config file (if any) afterwards, so it overrides.
struct EnsembleFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> ensemble_size;
  std::optional<int> n_sites;
  std::optional<double> field_h;
  std::vector<std::string> observables;
  std::vector<double> t_values;
  std::vector<int> v_values;
  std::optional<int> workers;
  std::optional<std::string> out;
  std::optional<int> max_degree;
  std::optional<int> max_delay;
  std::optional<double> noise_eta;

  void attach(CLI::App* app, bool sweep) {
    app->add_option("--config", config, "key = value config file; overrides flags")->check(CLI::ExistingFile);
    app->add_option("--seed", seed, "first coupling seed of the ensemble");
    app->add_option("--ensemble-size", ensemble_size, "number of Hamiltonians");
    app->add_option("--sites", n_sites, "number of spins");
    app->add_option("--field", field_h, "transverse field h");
    app->add_option("--observables", observables, "Pauli labels, e.g. Z_1 Z_2")->delimiter(',');
    app->add_option("--out", out, "output directory");
    app->add_option("--workers", workers, "worker threads (0: all cores)");
    if (sweep) {
      app->add_option("--t-values", t_values, "clock cycles")->delimiter(',');
      app->add_option("--v-values", v_values, "multiplexing counts")->delimiter(',');
      app->add_option("--max-degree", max_degree, "IPC maximum total degree");
      app->add_option("--max-delay", max_delay, "IPC maximum delay");
      app->add_option("--noise", noise_eta, "measurement noise eta");
    }
  }

  kobs::ExperimentConfig resolve() const {
    kobs::ExperimentConfig c;
    if (seed) {
      c.base_seed = *seed;
      c.seed_set = true;
    }
    if (ensemble_size) c.ensemble_size = *ensemble_size;
    if (n_sites) c.reservoir.n_sites = *n_sites;
    if (field_h) c.reservoir.field_h = *field_h;
    if (!observables.empty()) c.reservoir.observables = observables;
    if (!t_values.empty()) c.t_values = t_values;
    if (!v_values.empty()) c.v_values = v_values;
    if (workers) c.workers = *workers;
    if (out) c.output_dir = *out;
    if (max_degree) c.ipc.max_degree = *max_degree;
    if (max_delay) c.ipc.max_delay = *max_delay;
    if (noise_eta) c.reservoir.noise_eta = *noise_eta;
    if (!config.empty()) {
      for (const auto& [key, value] : kobs::parse_key_values(kobs::read_text_file(config), kobs::kConfigSchemaVersion)) {
        if (!kobs::apply_experiment_key(c, key, value)) {
          throw std::invalid_argument("config: unknown key '" + key + "'");
        }
      }
    }
    c.validate();
    if (!c.seed_set) throw std::invalid_argument("a coupling seed is required (--seed or `seed =` in the config)");
    return c;
  }
};

void run_sweep(const kobs::ExperimentConfig& c, bool ipc) {
  const auto result = ipc ? kobs::sweep_ipc(c) : kobs::sweep_observability(c);
  kobs::persist_sweep(result, c.output_dir);
  kobs::write_text_file(c.output_dir / "config.txt", kobs::format_experiment_config(c));
  std::cout << result.metric << ": " << result.cells << " cells in " << result.seconds << " s -> "
            << (c.output_dir / (result.metric + "_mean.csv")).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krylov observability and reservoir capacity experiments"};
  app.require_subcommand(1);

  EnsembleFlags gen_flags, ipc_flags, obs_flags, ts_flags;

  auto* gen = app.add_subcommand("gen-hamiltonians", "write the Ising ensemble as JSON operators");
  gen_flags.attach(gen, false);

  auto* sweep_ipc = app.add_subcommand("sweep-ipc", "total IPC over the (T, V) grid");
  ipc_flags.attach(sweep_ipc, true);

  auto* sweep_obs = app.add_subcommand("sweep-observability", "Krylov observability over the (T, V) grid");
  obs_flags.attach(sweep_obs, true);

  auto* cx = app.add_subcommand("complexity", "operator complexity K_O(t) of one Hamiltonian");
  std::uint64_t cx_seed = 0;
  int cx_sites = 4, cx_steps = 200;
  double cx_field = 0.5, cx_tmax = 20.0;
  std::string cx_obs = "Z_1", cx_out;
  cx->add_option("--seed", cx_seed, "coupling seed")->required();
  cx->add_option("--sites", cx_sites, "number of spins");
  cx->add_option("--field", cx_field, "transverse field h");
  cx->add_option("--observable", cx_obs, "Pauli label");
  cx->add_option("--t-max", cx_tmax, "last time");
  cx->add_option("--steps", cx_steps, "number of time steps");
  cx->add_option("--out", cx_out, "CSV path (stdout when omitted)");

  auto* ts = app.add_subcommand("timescales", "Zeno and Heisenberg times plus the Zeno-line overlay");
  ts_flags.attach(ts, true);

  auto* corr = app.add_subcommand("correlate", "Pearson correlation of two grids");
  std::string corr_a, corr_b;
  corr->add_option("a", corr_a, "first grid CSV")->required()->check(CLI::ExistingFile);
  corr->add_option("b", corr_b, "second grid CSV")->required()->check(CLI::ExistingFile);

  auto* diff = app.add_subcommand("diff-v", "forward differences of a grid along V");
  std::string diff_in, diff_out;
  diff->add_option("input", diff_in, "grid CSV")->required()->check(CLI::ExistingFile);
  diff->add_option("--out", diff_out, "output CSV")->required();

  auto* rep = app.add_subcommand("report", "summarize a run directory");
  std::string rep_dir;
  rep->add_option("dir", rep_dir, "run directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      if (!gen_flags.seed && gen_flags.config.empty()) throw std::invalid_argument("--seed is required");
      const auto c = gen_flags.resolve();
      fs::create_directories(c.output_dir);
      for (auto s : c.seeds()) {
        auto j = kobs::to_json(kobs::build_ising(c.reservoir.n_sites, c.reservoir.field_h, s));
        j["coupling_seed"] = s;
        j["couplings"] = kobs::draw_ising_couplings(c.reservoir.n_sites, s);
        j["field_h"] = c.reservoir.field_h;
        const auto path = c.output_dir / ("hamiltonian_seed" + std::to_string(s) + ".json");
        kobs::write_text_file(path, j.dump(2) + "\n");
        std::cout << path.string() << "\n";
      }
    } else if (*sweep_ipc) {
      run_sweep(ipc_flags.resolve(), true);
    } else if (*sweep_obs) {
      run_sweep(obs_flags.resolve(), false);
    } else if (*cx) {
      const auto h = kobs::build_ising(cx_sites, cx_field, cx_seed);
      const auto o = kobs::parse_pauli_label(cx_obs, cx_sites);
      std::vector<double> times;
      for (int i = 0; i <= cx_steps; ++i) times.push_back(cx_tmax * i / cx_steps);
      std::string csv = "t,complexity,weight_sum\n";
      for (const auto& p : kobs::complexity_profile(h, o, times)) {
        csv += kobs::format_double(p.t) + "," + kobs::format_double(p.complexity) + "," +
               kobs::format_double(p.weight_sum) + "\n";
      }
      if (cx_out.empty()) std::cout << csv;
      else kobs::write_text_file(cx_out, csv);
    } else if (*ts) {
      const auto c = ts_flags.resolve();
      fs::create_directories(c.output_dir);
      const auto rep_ts = kobs::timescale_report(kobs::ensemble_hamiltonians(c), kobs::configured_observables(c));
      kobs::write_text_file(c.output_dir / "timescales.json", kobs::to_json(rep_ts).dump(2) + "\n");
      const auto overlay = kobs::zeno_overlay(rep_ts.zeno_mean, rep_ts.heisenberg_time, c.t_values.front(),
                                              c.t_values.back(), c.v_values.front(), c.v_values.back());
      kobs::write_overlay_table(overlay, c.output_dir / "zeno_overlay.txt");
      std::cout << kobs::to_json(rep_ts).dump(2) << "\n";
    } else if (*corr) {
      std::cout << kobs::format_double(kobs::pearson(kobs::read_grid_csv(corr_a), kobs::read_grid_csv(corr_b))) << "\n";
    } else if (*diff) {
      kobs::write_grid_csv(kobs::finite_diff_V(kobs::read_grid_csv(diff_in)), diff_out);
    } else if (*rep) {
      const auto j = kobs::report(rep_dir);
      std::cout << kobs::read_text_file(fs::path(rep_dir) / "summary.txt");
      (void)j;
    }
  } catch (const std::exception& e) {
    std::cerr << "kobs: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
