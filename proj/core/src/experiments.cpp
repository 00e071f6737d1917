#include "kobs/experiments.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "kobs/text.hpp"

namespace kobs {

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  std::vector<std::uint64_t> s;
  for (int i = 0; i < ensemble_size; ++i) s.push_back(base_seed + static_cast<std::uint64_t>(i));
  return s;
}

std::size_t ExperimentConfig::input_length() const {
  return static_cast<std::size_t>(reservoir.washout) + static_cast<std::size_t>(ipc.train_rows) +
         static_cast<std::size_t>(ipc.test_rows);
}

void ExperimentConfig::validate() const {
  reservoir.validate();
  if (ensemble_size < 1) throw std::invalid_argument("experiment: ensemble_size must be >= 1");
  if (t_values.empty() || v_values.empty()) throw std::invalid_argument("experiment: empty sweep axis");
  for (std::size_t i = 0; i < t_values.size(); ++i) {
    if (!(t_values[i] > 0.0)) throw std::invalid_argument("experiment: T values must be positive");
    if (i && !(t_values[i] > t_values[i - 1])) throw std::invalid_argument("experiment: T values must ascend");
  }
  for (std::size_t i = 0; i < v_values.size(); ++i) {
    if (v_values[i] < 1) throw std::invalid_argument("experiment: V values must be >= 1");
    if (i && v_values[i] <= v_values[i - 1]) throw std::invalid_argument("experiment: V values must ascend");
  }
  if (workers < 0) throw std::invalid_argument("experiment: workers must be >= 0");
}

bool apply_experiment_key(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (apply_reservoir_key(c.reservoir, key, value)) return true;
  if (key == "t_values") {
    c.t_values.clear();
    for (const auto& s : split_list(value)) c.t_values.push_back(parse_double(s, key));
  } else if (key == "v_values") {
    c.v_values.clear();
    for (const auto& s : split_list(value)) c.v_values.push_back(parse_int(s, key));
  } else if (key == "seed") {
    c.base_seed = parse_u64(value, key);
    c.seed_set = true;
  } else if (key == "ensemble_size") c.ensemble_size = parse_int(value, key);
  else if (key == "input_seed") c.input_seed = parse_u64(value, key);
  else if (key == "max_degree") c.ipc.max_degree = parse_int(value, key);
  else if (key == "max_delay") c.ipc.max_delay = parse_int(value, key);
  else if (key == "train_rows") c.ipc.train_rows = parse_int(value, key);
  else if (key == "test_rows") c.ipc.test_rows = parse_int(value, key);
  else if (key == "ipc_threshold") c.ipc.threshold = parse_double(value, key);
  else if (key == "surrogates") c.ipc.surrogates = parse_int(value, key);
  else if (key == "surrogate_seed") c.ipc.surrogate_seed = parse_u64(value, key);
  else if (key == "krylov_tol") c.krylov_tol = parse_double(value, key);
  else if (key == "output_dir") c.output_dir = value;
  else if (key == "workers") c.workers = parse_int(value, key);
  else return false;
  return true;
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  ExperimentConfig c;
  for (const auto& [key, value] : parse_key_values(text, kConfigSchemaVersion)) {
    if (!apply_experiment_key(c, key, value)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ExperimentConfig read_experiment_config(const std::filesystem::path& path) {
  return parse_experiment_config(read_text_file(path));
}

std::string format_experiment_config(const ExperimentConfig& c) {
  std::ostringstream os;
  os << format_reservoir_config(c.reservoir);
  std::vector<std::string> t, v;
  for (double x : c.t_values) t.push_back(format_double(x));
  for (int x : c.v_values) v.push_back(std::to_string(x));
  os << "t_values = " << join_list(t) << "\n"
     << "v_values = " << join_list(v) << "\n"
     << "seed = " << c.base_seed << "\n"
     << "ensemble_size = " << c.ensemble_size << "\n"
     << "input_seed = " << c.input_seed << "\n"
     << "max_degree = " << c.ipc.max_degree << "\n"
     << "max_delay = " << c.ipc.max_delay << "\n"
     << "train_rows = " << c.ipc.train_rows << "\n"
     << "test_rows = " << c.ipc.test_rows << "\n";
  if (c.ipc.threshold) os << "ipc_threshold = " << format_double(*c.ipc.threshold) << "\n";
  os << "surrogates = " << c.ipc.surrogates << "\n"
     << "surrogate_seed = " << c.ipc.surrogate_seed << "\n"
     << "krylov_tol = " << format_double(c.krylov_tol) << "\n"
     << "output_dir = " << c.output_dir.string() << "\n"
     << "workers = " << c.workers << "\n";
  return os.str();
}

void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  std::size_t n = workers > 0 ? static_cast<std::size_t>(workers) : std::max(1u, std::thread::hardware_concurrency());
  n = std::min(n, count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (n == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n; ++w) pool.emplace_back(work);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<HermitianOperator> ensemble_hamiltonians(const ExperimentConfig& c) {
  std::vector<HermitianOperator> hs;
  for (auto s : c.seeds()) hs.push_back(build_ising(c.reservoir.n_sites, c.reservoir.field_h, s));
  return hs;
}

std::vector<HermitianOperator> configured_observables(const ExperimentConfig& c) {
  std::vector<HermitianOperator> obs;
  for (const auto& label : c.reservoir.observables) obs.push_back(parse_pauli_label(label, c.reservoir.n_sites));
  return obs;
}

namespace {

using Clock = std::chrono::steady_clock;

struct CellIndex {
  std::size_t seed, t, v;
};

CellIndex decompose(std::size_t i, const ExperimentConfig& c) {
  const std::size_t nv = c.v_values.size();
  const std::size_t nt = c.t_values.size();
  return {i / (nt * nv), (i / nv) % nt, i % nv};
}

[[noreturn]] void rethrow_cell(const std::string& metric, std::uint64_t seed, double t, int v) {
  try {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error(metric + " cell (seed=" + std::to_string(seed) + ", T=" + format_double(t) +
                             ", V=" + std::to_string(v) + ") failed: " + e.what());
  }
}

std::vector<SweepGrid> empty_grids(const ExperimentConfig& c, const std::string& metric) {
  std::vector<SweepGrid> grids;
  for (auto s : c.seeds()) {
    SweepGrid g = make_grid(c.t_values, c.v_values, metric);
    g.seeds = {s};
    grids.push_back(std::move(g));
  }
  return grids;
}

}  // namespace

SweepResult sweep_observability(const ExperimentConfig& c) {
  c.validate();
  const auto start = Clock::now();
  const auto seeds = c.seeds();
  const auto hs = ensemble_hamiltonians(c);
  const auto obs = configured_observables(c);

  std::vector<std::unique_ptr<ObservabilityModel>> models(seeds.size());
  parallel_for(seeds.size(), c.workers, [&](std::size_t s) {
    models[s] = std::make_unique<ObservabilityModel>(hs[s], obs, c.krylov_tol);
  });

  SweepResult res;
  res.metric = "krylov_observability";
  res.per_seed = empty_grids(c, res.metric);
  res.cells = seeds.size() * c.t_values.size() * c.v_values.size();
  std::vector<double> slots(res.cells);
  parallel_for(res.cells, c.workers, [&](std::size_t i) {
    const auto [s, t, v] = decompose(i, c);
    try {
      slots[i] = models[s]->evaluate(c.t_values[t], c.v_values[v]).total;
    } catch (...) {
      rethrow_cell(res.metric, seeds[s], c.t_values[t], c.v_values[v]);
    }
  });
  for (std::size_t i = 0; i < res.cells; ++i) {
    const auto [s, t, v] = decompose(i, c);
    res.per_seed[s].cells(static_cast<Eigen::Index>(t), static_cast<Eigen::Index>(v)) = slots[i];
  }
  res.mean = mean_grid(res.per_seed);
  res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return res;
}

SweepResult sweep_ipc(const ExperimentConfig& c) {
  c.validate();
  const auto start = Clock::now();
  const auto seeds = c.seeds();
  const auto inputs = draw_inputs(c.input_length(), c.input_seed);

  PropagatorCache cache;
  std::vector<std::shared_ptr<const Propagator>> props(seeds.size());
  const auto hs = ensemble_hamiltonians(c);
  parallel_for(seeds.size(), c.workers, [&](std::size_t s) { props[s] = cache.get(hs[s]); });

  SweepResult res;
  res.metric = "ipc_total";
  res.per_seed = empty_grids(c, res.metric);
  res.auxiliary["ipc_threshold"] = empty_grids(c, "ipc_threshold");
  res.auxiliary["capacity_min"] = empty_grids(c, "capacity_min");
  res.auxiliary["capacity_max"] = empty_grids(c, "capacity_max");
  res.cells = seeds.size() * c.t_values.size() * c.v_values.size();

  struct Slot {
    double total, threshold, min, max;
  };
  std::vector<Slot> slots(res.cells);
  parallel_for(res.cells, c.workers, [&](std::size_t i) {
    const auto [s, t, v] = decompose(i, c);
    try {
      ReservoirConfig rc = c.reservoir;
      rc.coupling_seed = seeds[s];
      rc.clock_cycle = c.t_values[t];
      rc.multiplexing = c.v_values[v];
      const StateMatrix sm = run_reservoir(*props[s], rc, inputs);
      const CapacityReport rep = total_ipc(sm.values, inputs, static_cast<std::size_t>(rc.washout), c.ipc);
      slots[i] = {rep.total, rep.threshold, rep.min_capacity, rep.max_capacity};
    } catch (...) {
      rethrow_cell(res.metric, seeds[s], c.t_values[t], c.v_values[v]);
    }
  });
  for (std::size_t i = 0; i < res.cells; ++i) {
    const auto [s, t, v] = decompose(i, c);
    const auto r = static_cast<Eigen::Index>(t);
    const auto col = static_cast<Eigen::Index>(v);
    res.per_seed[s].cells(r, col) = slots[i].total;
    res.auxiliary["ipc_threshold"][s].cells(r, col) = slots[i].threshold;
    res.auxiliary["capacity_min"][s].cells(r, col) = slots[i].min;
    res.auxiliary["capacity_max"][s].cells(r, col) = slots[i].max;
  }
  res.mean = mean_grid(res.per_seed);
  res.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return res;
}

void persist_sweep(const SweepResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write_set = [&](const std::string& metric, const std::vector<SweepGrid>& grids) {
    for (const auto& g : grids) write_grid_csv(g, dir / (metric + "_seed" + std::to_string(g.seeds.at(0)) + ".csv"));
  };
  write_set(r.metric, r.per_seed);
  write_grid_csv(r.mean, dir / (r.metric + "_mean.csv"));
  for (const auto& [name, grids] : r.auxiliary) write_set(name, grids);
  const nlohmann::json ledger{{"metric", r.metric},
                              {"seconds", r.seconds},
                              {"cells", r.cells},
                              {"seconds_per_cell", r.cells ? r.seconds / static_cast<double>(r.cells) : 0.0},
                              {"seeds", r.per_seed.size()}};
  write_text_file(dir / ("runtime_" + r.metric + ".json"), ledger.dump(2) + "\n");
}

nlohmann::json report(const std::filesystem::path& dir) {
  const std::vector<std::string> required{"ipc_total_mean.csv", "krylov_observability_mean.csv"};
  std::vector<std::string> missing;
  for (const auto& f : required) {
    if (!std::filesystem::exists(dir / f)) missing.push_back((dir / f).string());
  }
  if (!missing.empty()) throw std::runtime_error("report: missing inputs: " + join_list(missing));

  const SweepGrid ipc = read_grid_csv(dir / required[0]);
  const SweepGrid obs = read_grid_csv(dir / required[1]);
  nlohmann::json j;
  j["pearson"] = pearson(ipc, obs);
  for (const SweepGrid* g : {&ipc, &obs}) {
    const auto f = saturation_front(*g);
    j["saturation"][g->metric] = {{"t", f.t}, {"v", f.v}, {"maximum", f.maximum}, {"fraction", f.fraction}};
  }
  if (std::filesystem::exists(dir / "timescales.json")) {
    j["timescales"] = nlohmann::json::parse(read_text_file(dir / "timescales.json"));
  }
  j["runtimes"] = nlohmann::json::object();
  for (const auto& metric : {"ipc_total", "krylov_observability"}) {
    const auto p = dir / (std::string("runtime_") + metric + ".json");
    if (std::filesystem::exists(p)) j["runtimes"][metric] = nlohmann::json::parse(read_text_file(p));
  }
  write_text_file(dir / "summary.json", j.dump(2) + "\n");

  std::ostringstream os;
  os << "Pearson correlation (IPC vs observability): " << format_double(j["pearson"].get<double>()) << "\n";
  for (const auto& [metric, f] : j["saturation"].items()) {
    os << "Saturation front of " << metric << " (" << f["fraction"].get<double>() * 100 << "% of max "
       << f["maximum"].get<double>() << "): T = " << f["t"].get<double>() << ", V = " << f["v"].get<int>() << "\n";
  }
  if (j.contains("timescales")) {
    const auto& ts = j["timescales"];
    if (!ts["zeno_mean"].is_null()) os << "Mean Zeno time: " << ts["zeno_mean"].get<double>() << "\n";
    os << "Mean Heisenberg time: " << ts["heisenberg_time"].get<double>() << "\n";
  }
  for (const auto& [metric, rt] : j["runtimes"].items()) {
    os << "Runtime " << metric << ": " << rt["seconds"].get<double>() << " s over " << rt["cells"].get<int>()
       << " cells\n";
  }
  write_text_file(dir / "summary.txt", os.str());
  return j;
}

}  // namespace kobs
