#include <doctest.h>

#include <atomic>
#include <filesystem>

#include "kobs/experiments.hpp"

using namespace kobs;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny() {
  ExperimentConfig c;
  c.base_seed = 3;
  c.seed_set = true;
  c.ensemble_size = 2;
  c.reservoir.n_sites = 2;
  c.reservoir.washout = 20;
  c.t_values = {2.0, 5.0};
  c.v_values = {1, 3};
  c.ipc.max_degree = 2;
  c.ipc.max_delay = 3;
  c.ipc.train_rows = 300;
  c.ipc.test_rows = 100;
  c.ipc.surrogates = 20;
  c.workers = 2;
  return c;
}

}  // namespace

TEST_CASE("config text") {
  auto c = tiny();
  c.output_dir = "somewhere";
  const auto back = parse_experiment_config(format_experiment_config(c));
  CHECK(back.base_seed == 3);
  CHECK(back.seed_set);
  CHECK(back.ensemble_size == 2);
  CHECK(back.t_values == c.t_values);
  CHECK(back.v_values == c.v_values);
  CHECK(back.ipc.max_delay == 3);
  CHECK(back.ipc.train_rows == 300);
  CHECK(back.output_dir == c.output_dir);
  CHECK(back.reservoir.n_sites == 2);
  CHECK(c.seeds() == std::vector<std::uint64_t>{3, 4});
  CHECK(c.input_length() == 420);
  CHECK_THROWS_AS(parse_experiment_config("v_values = 3, 1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_experiment_config("bogus = 1\n"), std::invalid_argument);
}

TEST_CASE("parallel_for") {
  std::vector<int> hit(50, 0);
  parallel_for(50, 3, [&](std::size_t i) { hit[i] += 1; });
  for (int h : hit) CHECK(h == 1);
  CHECK_THROWS_WITH(parallel_for(10, 3,
                                 [](std::size_t i) {
                                   if (i == 4 || i == 7) throw std::runtime_error("cell " + std::to_string(i));
                                 }),
                    "cell 4");
}

TEST_CASE("sweeps") {
  const auto c = tiny();
  const auto obs = sweep_observability(c);
  CHECK(obs.metric == "krylov_observability");
  CHECK(obs.per_seed.size() == 2);
  CHECK(obs.cells == 8);
  for (const auto& g : obs.per_seed) {
    CHECK(g.cells.col(0).isConstant(1.0));
    CHECK(g.cells.maxCoeff() <= 3.0);
  }
  // The IPC bound only holds up to sampling error of the test split.
  auto ci = c;
  ci.ipc.train_rows = 1000;
  ci.ipc.test_rows = 1000;
  const auto ipc = sweep_ipc(ci);
  CHECK(ipc.metric == "ipc_total");
  CHECK(ipc.mean.cells.rows() == 2);
  CHECK(ipc.auxiliary.count("ipc_threshold") == 1);
  CHECK((ipc.mean.cells.array() >= 0).all());
  CHECK((ipc.mean.cells.col(0).array() <= 1 + 1e-6).all());
  CHECK((ipc.mean.cells.col(1).array() <= 3 + 1e-6).all());

  auto c1 = ci;
  c1.workers = 1;
  CHECK(sweep_ipc(c1).mean.cells == ipc.mean.cells);

  const auto dir = fs::temp_directory_path() / "kobs_unit_experiments";
  fs::remove_all(dir);
  CHECK_THROWS(report(dir));
  persist_sweep(obs, dir);
  CHECK_THROWS(report(dir));
  persist_sweep(ipc, dir);
  CHECK(fs::exists(dir / "ipc_total_seed3.csv"));
  CHECK(fs::exists(dir / "krylov_observability_mean.csv"));
  const auto j = report(dir);
  CHECK(fs::exists(dir / "summary.json"));
  CHECK(j.contains("pearson"));
}
