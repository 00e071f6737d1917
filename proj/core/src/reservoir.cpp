#include "kobs/reservoir.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include "kobs/text.hpp"

namespace kobs {

void ReservoirConfig::validate() const {
  if (n_sites < 1) throw std::invalid_argument("reservoir: n_sites must be >= 1");
  if (!(clock_cycle > 0.0)) throw std::invalid_argument("reservoir: clock cycle T must be positive");
  if (multiplexing < 1) throw std::invalid_argument("reservoir: multiplexing V must be >= 1");
  if (!(noise_eta >= 0.0)) throw std::invalid_argument("reservoir: noise eta must be >= 0");
  if (washout < 0) throw std::invalid_argument("reservoir: washout must be >= 0");
  if (observables.empty()) throw std::invalid_argument("reservoir: no observables");
}

bool apply_reservoir_key(ReservoirConfig& c, const std::string& key, const std::string& value) {
  if (key == "n_sites") c.n_sites = parse_int(value, key);
  else if (key == "field_h") c.field_h = parse_double(value, key);
  else if (key == "coupling_seed") c.coupling_seed = parse_u64(value, key);
  else if (key == "clock_cycle") c.clock_cycle = parse_double(value, key);
  else if (key == "multiplexing") c.multiplexing = parse_int(value, key);
  else if (key == "observables") c.observables = split_list(value);
  else if (key == "noise_eta") c.noise_eta = parse_double(value, key);
  else if (key == "noise_seed") c.noise_seed = parse_u64(value, key);
  else if (key == "washout") c.washout = parse_int(value, key);
  else return false;
  return true;
}

ReservoirConfig parse_reservoir_config(const std::string& text) {
  ReservoirConfig c;
  for (const auto& [key, value] : parse_key_values(text, kConfigSchemaVersion)) {
    if (!apply_reservoir_key(c, key, value)) throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  c.validate();
  return c;
}

ReservoirConfig read_reservoir_config(const std::filesystem::path& path) {
  return parse_reservoir_config(read_text_file(path));
}

std::string format_reservoir_config(const ReservoirConfig& c) {
  std::ostringstream os;
  os << "schema_version = " << kConfigSchemaVersion << "\n"
     << "n_sites = " << c.n_sites << "\n"
     << "field_h = " << format_double(c.field_h) << "\n"
     << "coupling_seed = " << c.coupling_seed << "\n"
     << "clock_cycle = " << format_double(c.clock_cycle) << "\n"
     << "multiplexing = " << c.multiplexing << "\n"
     << "observables = " << join_list(c.observables) << "\n"
     << "noise_eta = " << format_double(c.noise_eta) << "\n"
     << "noise_seed = " << c.noise_seed << "\n"
     << "washout = " << c.washout << "\n";
  return os.str();
}

StateMatrix run_reservoir(const ReservoirConfig& config, std::span<const double> inputs, const RunOptions& options) {
  config.validate();
  const Propagator prop(build_ising(config.n_sites, config.field_h, config.coupling_seed));
  return run_reservoir(prop, config, inputs, options);
}

StateMatrix run_reservoir(const Propagator& prop, const ReservoirConfig& config, std::span<const double> inputs,
                          const RunOptions& options) {
  config.validate();
  const Eigen::Index n = Eigen::Index{1} << config.n_sites;
  if (prop.dim() != n) throw std::invalid_argument("run_reservoir: propagator dimension does not match n_sites");
  if (inputs.size() <= static_cast<std::size_t>(config.washout)) {
    throw std::invalid_argument("run_reservoir: input length must exceed washout");
  }
  for (double u : inputs) {
    if (!(u >= -1.0 && u <= 1.0)) throw std::invalid_argument("run_reservoir: input outside [-1, 1]");
  }

  const int v = config.multiplexing;
  const auto k = static_cast<int>(config.observables.size());
  const Eigen::Index n2 = n * n;

  // Row r of `probe` holds conj-free entries of O_i(tau_j)^T so that
  // <O_i(tau_j)> = Re(probe.row(r) . vec(rho)).
  ComplexMatrix probe(static_cast<Eigen::Index>(k) * v, n2);
  StateMatrix out;
  out.labels.reserve(static_cast<std::size_t>(k * v));
  for (int i = 0; i < k; ++i) {
    const HermitianOperator o = parse_pauli_label(config.observables[static_cast<std::size_t>(i)], config.n_sites);
    for (int j = 1; j <= v; ++j) {
      const ComplexMatrix oj = prop.heisenberg(o.matrix(), j * config.clock_cycle / v);
      const ComplexMatrix ojt = oj.transpose();
      probe.row(static_cast<Eigen::Index>(i) * v + (j - 1)) = Eigen::Map<const ComplexVector>(ojt.data(), n2).transpose();
      out.labels.push_back(o.label() + "@" + std::to_string(j));
    }
  }

  const ComplexMatrix u_t = prop.unitary(config.clock_cycle);
  ComplexMatrix rho;
  if (options.initial_state) {
    if (options.initial_state->dim() != n) throw std::invalid_argument("run_reservoir: initial state dimension");
    rho = options.initial_state->matrix();
  } else {
    rho = DensityMatrix::maximally_mixed(n).matrix();
  }

  const auto rows = static_cast<Eigen::Index>(inputs.size()) - config.washout;
  out.values.resize(rows, static_cast<Eigen::Index>(k) * v);
  ComplexVector meas(probe.rows());
  for (std::size_t step = 0; step < inputs.size(); ++step) {
    const ComplexMatrix evolved = u_t * rho * u_t.adjoint();
    const ComplexMatrix reduced = partial_trace_first(evolved, 2);
    const ComplexVector psi = encode_input(inputs[step]);
    const ComplexMatrix injected = psi * psi.adjoint();
    rho = Eigen::kroneckerProduct(injected, reduced).eval();
    if (options.validate_states) {
      const std::string defect = density_matrix_defect(rho, 1e-9);
      if (!defect.empty()) {
        throw NumericalError("run_reservoir: invalid state at step " + std::to_string(step) + ": " + defect);
      }
    }
    const auto row = static_cast<Eigen::Index>(step) - config.washout;
    if (row < 0) continue;
    meas.noalias() = probe * Eigen::Map<const ComplexVector>(rho.data(), n2);
    out.values.row(row) = meas.real().transpose();
  }

  if (config.noise_eta > 0.0) {
    std::mt19937_64 gen(config.noise_seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (Eigen::Index r = 0; r < out.values.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.values.cols(); ++c) out.values(r, c) += config.noise_eta * normal(gen);
    }
  }
  return out;
}

RealMatrix pseudo_inverse(const RealMatrix& a) {
  if (a.size() == 0) return RealMatrix::Zero(a.cols(), a.rows());
  Eigen::BDCSVD<RealMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  const double cut = 1e-12 * (s.size() > 0 ? s(0) : 0.0);
  RealVector inv = RealVector::Zero(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > cut && s(i) > 0.0) inv(i) = 1.0 / s(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

ReadoutWeights train_readout(const RealMatrix& s_train, const RealMatrix& targets) {
  if (s_train.rows() != targets.rows()) throw std::invalid_argument("train_readout: row counts differ");
  ReadoutWeights w;
  w.weights = pseudo_inverse(s_train) * targets;
  const RealMatrix resid = s_train * w.weights - targets;
  w.training_residual = targets.size() > 0 ? resid.squaredNorm() / static_cast<double>(targets.size()) : 0.0;
  return w;
}

RealMatrix predict(const RealMatrix& s, const ReadoutWeights& w) {
  if (s.cols() != w.weights.rows()) throw std::invalid_argument("predict: dimension mismatch");
  return s * w.weights;
}

std::vector<double> draw_inputs(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> u(count);
  for (auto& x : u) x = 2.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53) - 1.0;
  return u;
}

void write_state_csv(const StateMatrix& s, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  os << join_list(s.labels) << "\n";
  for (Eigen::Index r = 0; r < s.rows(); ++r) {
    for (Eigen::Index c = 0; c < s.cols(); ++c) os << (c ? "," : "") << format_double(s.values(r, c));
    os << "\n";
  }
}

StateMatrix read_state_csv(const std::filesystem::path& path) {
  std::istringstream is(read_text_file(path));
  StateMatrix s;
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error(path.string() + ": empty state CSV");
  s.labels = split_list(line);
  std::vector<double> flat;
  Eigen::Index rows = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split_list(line);
    if (cells.size() != s.labels.size()) throw std::runtime_error(path.string() + ": ragged row");
    for (const auto& c : cells) flat.push_back(parse_double(c, "state entry"));
    ++rows;
  }
  const auto cols = static_cast<Eigen::Index>(s.labels.size());
  s.values = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(flat.data(), rows, cols);
  return s;
}

void write_state_binary(const StateMatrix& s, const std::filesystem::path& path, const nlohmann::json& extra) {
  static_assert(std::endian::native == std::endian::little, "binary state layout assumes little-endian");
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = s.values;
  {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    os.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * rm.size()));
  }
  nlohmann::json meta{{"rows", s.rows()},        {"cols", s.cols()},           {"labels", s.labels},
                      {"dtype", "float64"},      {"layout", "row-major"},      {"endianness", "little"}};
  if (extra.is_object()) meta["extra"] = extra;
  std::ofstream js(path.string() + ".json");
  js << meta.dump(2) << "\n";
}

StateMatrix read_state_binary(const std::filesystem::path& path) {
  const auto meta = nlohmann::json::parse(read_text_file(path.string() + ".json"));
  const auto rows = meta.at("rows").get<Eigen::Index>();
  const auto cols = meta.at("cols").get<Eigen::Index>();
  StateMatrix s;
  s.labels = meta.at("labels").get<std::vector<std::string>>();
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(rows, cols);
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  is.read(reinterpret_cast<char*>(rm.data()), static_cast<std::streamsize>(sizeof(double) * rm.size()));
  if (is.gcount() != static_cast<std::streamsize>(sizeof(double) * rm.size())) {
    throw std::runtime_error(path.string() + ": truncated binary state matrix");
  }
  s.values = rm;
  return s;
}

}  // namespace kobs
