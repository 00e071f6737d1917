#include "kobs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "kobs/text.hpp"

namespace kobs {

void SweepGrid::validate() const {
  if (cells.rows() != static_cast<Eigen::Index>(t_values.size()) ||
      cells.cols() != static_cast<Eigen::Index>(v_values.size())) {
    throw std::invalid_argument("SweepGrid: cell shape does not match axes");
  }
  if (!std::is_sorted(t_values.begin(), t_values.end()) || !std::is_sorted(v_values.begin(), v_values.end())) {
    throw std::invalid_argument("SweepGrid: axes must be ascending");
  }
}

SweepGrid make_grid(std::vector<double> t_values, std::vector<int> v_values, std::string metric) {
  SweepGrid g;
  g.cells = RealMatrix::Zero(static_cast<Eigen::Index>(t_values.size()), static_cast<Eigen::Index>(v_values.size()));
  g.t_values = std::move(t_values);
  g.v_values = std::move(v_values);
  g.metric = std::move(metric);
  g.validate();
  return g;
}

namespace {

void require_same_axes(const SweepGrid& a, const SweepGrid& b, const char* what) {
  if (a.t_values != b.t_values || a.v_values != b.v_values) {
    throw std::invalid_argument(std::string(what) + ": grid axes differ");
  }
}

std::string join_numbers(const auto& values) {
  std::vector<std::string> s;
  for (const auto& v : values) {
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) s.push_back(format_double(v));
    else s.push_back(std::to_string(v));
  }
  return join_list(s);
}

}  // namespace

SweepGrid mean_grid(const std::vector<SweepGrid>& grids) {
  if (grids.empty()) throw std::invalid_argument("mean_grid: no grids");
  SweepGrid m = grids.front();
  m.seeds.clear();
  m.aggregation = "mean";
  m.cells.setZero();
  for (const auto& g : grids) {
    require_same_axes(g, m, "mean_grid");
    if (g.metric != m.metric) throw std::invalid_argument("mean_grid: metrics differ");
    m.cells += g.cells;
    m.seeds.insert(m.seeds.end(), g.seeds.begin(), g.seeds.end());
  }
  m.cells /= static_cast<double>(grids.size());
  return m;
}

void write_grid_csv(const SweepGrid& g, const std::filesystem::path& path) {
  g.validate();
  std::ostringstream os;
  os << "# metric: " << g.metric << "\n"
     << "# aggregation: " << g.aggregation << "\n"
     << "# seeds: " << join_numbers(g.seeds) << "\n"
     << "# t_values: " << join_numbers(g.t_values) << "\n"
     << "# v_values: " << join_numbers(g.v_values) << "\n"
     << "T\\V," << join_numbers(g.v_values) << "\n";
  for (std::size_t r = 0; r < g.t_values.size(); ++r) {
    os << format_double(g.t_values[r]);
    for (Eigen::Index c = 0; c < g.cells.cols(); ++c) os << "," << format_double(g.cells(static_cast<Eigen::Index>(r), c));
    os << "\n";
  }
  write_text_file(path, os.str());
}

SweepGrid read_grid_csv(const std::filesystem::path& path) {
  std::istringstream is(read_text_file(path));
  SweepGrid g;
  std::string line;
  std::vector<std::vector<double>> rows;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      const std::string key = trim(line.substr(1, colon - 1));
      const std::string value = trim(line.substr(colon + 1));
      if (key == "metric") g.metric = value;
      else if (key == "aggregation") g.aggregation = value;
      else if (key == "seeds") for (const auto& s : split_list(value)) g.seeds.push_back(parse_u64(s, "seed"));
      continue;
    }
    const auto cells = split_list(line);
    if (!header_seen) {
      header_seen = true;
      for (std::size_t i = 1; i < cells.size(); ++i) g.v_values.push_back(parse_int(cells[i], "V axis"));
      continue;
    }
    if (cells.size() != g.v_values.size() + 1) throw std::runtime_error(path.string() + ": ragged grid row");
    g.t_values.push_back(parse_double(cells[0], "T axis"));
    std::vector<double> row;
    for (std::size_t i = 1; i < cells.size(); ++i) row.push_back(parse_double(cells[i], "grid cell"));
    rows.push_back(std::move(row));
  }
  if (!header_seen) throw std::runtime_error(path.string() + ": missing grid header");
  g.cells.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(g.v_values.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) g.cells(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  g.validate();
  return g;
}

double pearson(const SweepGrid& a, const SweepGrid& b) {
  require_same_axes(a, b, "pearson");
  const Eigen::ArrayXd x = a.cells.reshaped().array() - a.cells.mean();
  const Eigen::ArrayXd y = b.cells.reshaped().array() - b.cells.mean();
  const double vx = x.square().sum();
  const double vy = y.square().sum();
  if (!(vx > 0.0) || !(vy > 0.0)) throw NumericalError("pearson: zero variance grid");
  return std::clamp((x * y).sum() / std::sqrt(vx * vy), -1.0, 1.0);
}

SweepGrid finite_diff_V(const SweepGrid& g) {
  g.validate();
  if (g.v_values.size() < 2) throw std::invalid_argument("finite_diff_V: need at least two V values");
  SweepGrid d = g;
  d.metric = "delta_per_V";
  d.v_values.pop_back();
  d.cells.resize(g.cells.rows(), g.cells.cols() - 1);
  for (Eigen::Index c = 0; c + 1 < g.cells.cols(); ++c) {
    const double dv = g.v_values[static_cast<std::size_t>(c) + 1] - g.v_values[static_cast<std::size_t>(c)];
    d.cells.col(c) = (g.cells.col(c + 1) - g.cells.col(c)) / dv;
  }
  return d;
}

ZenoOverlay zeno_overlay(double tau_z, double heisenberg_time, double t_lo, double t_hi, double v_lo, double v_hi,
                         int samples) {
  if (!(tau_z > 0.0)) throw std::invalid_argument("zeno_overlay: tau_z must be positive");
  if (samples < 2) throw std::invalid_argument("zeno_overlay: need at least two samples");
  ZenoOverlay o;
  o.tau_z = tau_z;
  o.heisenberg_time = heisenberg_time;
  if (std::isinf(tau_z)) return o;
  const double lo = std::max(v_lo, t_lo / tau_z);
  const double hi = std::min(v_hi, t_hi / tau_z);
  if (!(hi >= lo)) return o;
  for (int i = 0; i < samples; ++i) {
    const double v = lo + (hi - lo) * i / (samples - 1);
    o.curve.emplace_back(tau_z * v, v);
  }
  return o;
}

ZenoOverlay zeno_overlay(double tau_z, double heisenberg_time, const SweepGrid& axes, int samples) {
  axes.validate();
  if (axes.t_values.empty() || axes.v_values.empty()) throw std::invalid_argument("zeno_overlay: empty axes");
  return zeno_overlay(tau_z, heisenberg_time, axes.t_values.front(), axes.t_values.back(), axes.v_values.front(),
                      axes.v_values.back(), samples);
}

void write_overlay_table(const ZenoOverlay& o, const std::filesystem::path& path) {
  std::ostringstream os;
  os << "# tau_z: " << format_double(o.tau_z) << "\n"
     << "# heisenberg_time: " << format_double(o.heisenberg_time) << "\n"
     << "T V\n";
  for (const auto& [t, v] : o.curve) os << format_double(t) << " " << format_double(v) << "\n";
  write_text_file(path, os.str());
}

SaturationFront saturation_front(const SweepGrid& g, double fraction) {
  g.validate();
  if (g.cells.size() == 0) throw std::invalid_argument("saturation_front: empty grid");
  SaturationFront f;
  f.fraction = fraction;
  f.maximum = g.cells.maxCoeff();
  const double level = fraction * f.maximum;
  bool found = false;
  for (Eigen::Index r = 0; r < g.cells.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cells.cols(); ++c) {
      if (g.cells(r, c) < level) continue;
      const double t = g.t_values[static_cast<std::size_t>(r)];
      const int v = g.v_values[static_cast<std::size_t>(c)];
      if (!found) {
        f.t = t;
        f.v = v;
        found = true;
      }
      f.t = std::min(f.t, t);
      f.v = std::min(f.v, v);
    }
  }
  return f;
}

}  // namespace kobs
