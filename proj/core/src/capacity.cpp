#include "kobs/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "kobs/reservoir.hpp"
#include "kobs/text.hpp"

namespace kobs {

double legendre(int k, double x) {
  if (k < 0) throw std::invalid_argument("legendre: degree must be >= 0");
  if (k == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int n = 1; n < k; ++n) {
    const double p2 = ((2.0 * n + 1.0) * x * p1 - n * p0) / (n + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

int TargetSpec::total_degree() const {
  int d = 0;
  for (const auto& t : terms) d += t.degree;
  return d;
}

int TargetSpec::max_delay() const {
  int d = 0;
  for (const auto& t : terms) d = std::max(d, t.delay);
  return d;
}

std::string TargetSpec::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    s += (i ? "*" : "") + std::to_string(terms[i].delay) + "^" + std::to_string(terms[i].degree);
  }
  return s;
}

void TargetSpec::validate() const {
  if (terms.empty()) throw std::invalid_argument("TargetSpec: no terms");
  std::set<int> seen;
  for (const auto& t : terms) {
    if (t.delay < 0) throw std::invalid_argument("TargetSpec: negative delay");
    if (t.degree < 1) throw std::invalid_argument("TargetSpec: degree must be >= 1");
    if (!seen.insert(t.delay).second) throw std::invalid_argument("TargetSpec: repeated delay");
  }
}

namespace {

// Degree compositions of `remaining` over delays chosen ascending from `next`.
void enumerate_rec(int remaining, int next, int max_delay, TargetSpec& cur, std::vector<TargetSpec>& out,
                   std::size_t cap) {
  if (remaining == 0) {
    if (out.size() >= cap) throw std::length_error("enumerate_targets: enumeration cap exceeded");
    out.push_back(cur);
    return;
  }
  for (int d = next; d <= max_delay; ++d) {
    for (int k = 1; k <= remaining; ++k) {
      cur.terms.push_back({d, k});
      enumerate_rec(remaining - k, d + 1, max_delay, cur, out, cap);
      cur.terms.pop_back();
    }
  }
}

std::vector<int> delays_of(const TargetSpec& s) {
  std::vector<int> v;
  for (const auto& t : s.terms) v.push_back(t.delay);
  return v;
}

std::vector<int> degrees_of(const TargetSpec& s) {
  std::vector<int> v;
  for (const auto& t : s.terms) v.push_back(t.degree);
  return v;
}

}  // namespace

std::vector<TargetSpec> enumerate_targets(int max_degree, int max_delay, std::size_t cap) {
  if (max_degree < 1) throw std::invalid_argument("enumerate_targets: max_degree must be >= 1");
  if (max_delay < 0) throw std::invalid_argument("enumerate_targets: max_delay must be >= 0");
  std::vector<TargetSpec> out;
  for (int deg = 1; deg <= max_degree; ++deg) {
    const std::size_t begin = out.size();
    TargetSpec cur;
    enumerate_rec(deg, 0, max_delay, cur, out, cap);
    std::sort(out.begin() + static_cast<std::ptrdiff_t>(begin), out.end(), [](const TargetSpec& a, const TargetSpec& b) {
      const auto da = delays_of(a), db = delays_of(b);
      if (da != db) return da < db;
      return degrees_of(a) < degrees_of(b);
    });
  }
  return out;
}

RealVector build_target(std::span<const double> inputs, const TargetSpec& spec, std::size_t first, std::size_t rows) {
  spec.validate();
  if (first < static_cast<std::size_t>(spec.max_delay())) {
    throw std::invalid_argument("build_target: insufficient history for delay " + std::to_string(spec.max_delay()));
  }
  if (first + rows > inputs.size()) throw std::invalid_argument("build_target: window exceeds input length");
  RealVector z(static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    double v = 1.0;
    for (const auto& t : spec.terms) v *= legendre(t.degree, inputs[first + r - static_cast<std::size_t>(t.delay)]);
    z(static_cast<Eigen::Index>(r)) = v;
  }
  return z;
}

CapacityEvaluator::CapacityEvaluator(const RealMatrix& s_train, const RealMatrix& s_test) {
  if (s_train.rows() < 2 || s_test.rows() < 2) throw std::invalid_argument("capacity: splits need at least 2 rows");
  if (s_train.cols() != s_test.cols()) throw std::invalid_argument("capacity: feature counts differ between splits");
  const RealVector mean = s_train.colwise().mean().transpose();
  const RealMatrix centered = s_train.rowwise() - mean.transpose();
  pinv_ = pseudo_inverse(centered);
  s_test_ = s_test.rowwise() - mean.transpose();
}

RealVector CapacityEvaluator::capacities(const RealMatrix& z_train, const RealMatrix& z_test) const {
  if (z_train.rows() != pinv_.cols() || z_test.rows() != s_test_.rows() || z_train.cols() != z_test.cols()) {
    throw std::invalid_argument("capacity: target splits not aligned with feature splits");
  }
  const RealVector train_mean = z_train.colwise().mean().transpose();
  const RealMatrix w = pinv_ * (z_train.rowwise() - train_mean.transpose());
  const RealMatrix pred = s_test_ * w;
  RealVector out(z_train.cols());
  for (Eigen::Index c = 0; c < z_train.cols(); ++c) {
    const RealVector y = z_test.col(c).array() - z_test.col(c).mean();
    const RealVector p = pred.col(c).array() - pred.col(c).mean();
    const double vy = y.squaredNorm();
    const double vp = p.squaredNorm();
    if (!(vy > 0.0) || !(vp > 0.0)) {
      out(c) = 0.0;
      continue;
    }
    const double r = y.dot(p);
    out(c) = std::clamp(r * r / (vy * vp), 0.0, 1.0);
  }
  return out;
}

double capacity_of_target(const RealMatrix& s_train, const RealMatrix& s_test, const RealVector& z_train,
                          const RealVector& z_test) {
  if (s_train.rows() != z_train.size() || s_test.rows() != z_test.size()) {
    throw std::invalid_argument("capacity_of_target: splits not aligned");
  }
  return CapacityEvaluator(s_train, s_test).capacities(z_train, z_test)(0);
}

double calibrate_threshold(const CapacityEvaluator& eval, std::span<const double> inputs, std::size_t first,
                           std::span<const TargetSpec> targets, const CapacityOptions& options) {
  if (options.surrogates < 1) throw std::invalid_argument("calibrate_threshold: need at least one surrogate");
  if (targets.empty()) throw std::invalid_argument("calibrate_threshold: empty target list");
  const auto train = static_cast<std::size_t>(eval.train_rows());
  const auto test = static_cast<std::size_t>(eval.test_rows());
  std::mt19937_64 gen(options.surrogate_seed);
  std::vector<double> shuffled(inputs.begin(), inputs.end());
  RealMatrix z_train(static_cast<Eigen::Index>(train), options.surrogates);
  RealMatrix z_test(static_cast<Eigen::Index>(test), options.surrogates);
  for (int s = 0; s < options.surrogates; ++s) {
    // Fisher-Yates with our own index draws keeps the permutation independent
    // of the standard library's shuffle implementation.
    for (std::size_t i = shuffled.size() - 1; i > 0; --i) std::swap(shuffled[i], shuffled[gen() % (i + 1)]);
    const TargetSpec& spec = targets[static_cast<std::size_t>(s) % targets.size()];
    const RealVector z = build_target(shuffled, spec, first, train + test);
    z_train.col(s) = z.head(static_cast<Eigen::Index>(train));
    z_test.col(s) = z.tail(static_cast<Eigen::Index>(test));
  }
  RealVector c = eval.capacities(z_train, z_test);
  std::vector<double> v(c.data(), c.data() + c.size());
  std::sort(v.begin(), v.end());
  const auto rank = static_cast<std::size_t>(std::ceil(options.surrogate_quantile * static_cast<double>(v.size())));
  return v[std::clamp<std::size_t>(rank, 1, v.size()) - 1];
}

CapacityReport total_ipc(const RealMatrix& s, std::span<const double> inputs, std::size_t first,
                         const CapacityOptions& options) {
  if (options.max_degree < 1) throw std::invalid_argument("total_ipc: max_degree must be >= 1");
  if (options.max_delay < 1) throw std::invalid_argument("total_ipc: max_delay must be >= 1");
  if (options.train_rows < 2 || options.test_rows < 2) throw std::invalid_argument("total_ipc: degenerate split sizes");
  const auto train = static_cast<std::size_t>(options.train_rows);
  const auto test = static_cast<std::size_t>(options.test_rows);
  if (static_cast<std::size_t>(s.rows()) < train + test) {
    throw std::invalid_argument("total_ipc: state matrix has fewer rows than train + test");
  }
  if (first < static_cast<std::size_t>(options.max_delay)) {
    throw std::invalid_argument("total_ipc: need max_delay inputs of history before the first row");
  }
  if (first + train + test > inputs.size()) throw std::invalid_argument("total_ipc: input sequence too short");

  const auto targets = enumerate_targets(options.max_degree, options.max_delay, options.enumeration_cap);
  const CapacityEvaluator eval(s.topRows(static_cast<Eigen::Index>(train)),
                               s.middleRows(static_cast<Eigen::Index>(train), static_cast<Eigen::Index>(test)));

  CapacityReport rep;
  rep.options = options;
  rep.features = s.cols();
  rep.threshold = options.threshold ? *options.threshold : calibrate_threshold(eval, inputs, first, targets, options);

  const auto m = static_cast<Eigen::Index>(targets.size());
  RealMatrix z_train(static_cast<Eigen::Index>(train), m);
  RealMatrix z_test(static_cast<Eigen::Index>(test), m);
  for (Eigen::Index c = 0; c < m; ++c) {
    const RealVector z = build_target(inputs, targets[static_cast<std::size_t>(c)], first, train + test);
    z_train.col(c) = z.head(static_cast<Eigen::Index>(train));
    z_test.col(c) = z.tail(static_cast<Eigen::Index>(test));
  }
  const RealVector cap = eval.capacities(z_train, z_test);
  rep.evaluated = static_cast<int>(m);
  rep.min_capacity = m > 0 ? cap.minCoeff() : 0.0;
  rep.max_capacity = m > 0 ? cap.maxCoeff() : 0.0;
  for (int d = 1; d <= options.max_degree; ++d) rep.per_order[d] = 0.0;
  for (Eigen::Index c = 0; c < m; ++c) {
    if (cap(c) < rep.threshold) continue;
    const auto& spec = targets[static_cast<std::size_t>(c)];
    rep.per_target.push_back({spec, cap(c)});
    rep.per_order[spec.total_degree()] += cap(c);
  }
  for (const auto& [order, sum] : rep.per_order) rep.total += sum;
  return rep;
}

nlohmann::json to_json(const CapacityReport& r) {
  nlohmann::json targets = nlohmann::json::array();
  for (const auto& t : r.per_target) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& term : t.spec.terms) terms.push_back({{"delay", term.delay}, {"degree", term.degree}});
    targets.push_back({{"terms", terms}, {"capacity", t.capacity}});
  }
  nlohmann::json orders = nlohmann::json::object();
  for (const auto& [order, sum] : r.per_order) orders[std::to_string(order)] = sum;
  const auto& o = r.options;
  return {{"per_target", targets},
          {"per_order", orders},
          {"total", r.total},
          {"threshold", r.threshold},
          {"evaluated", r.evaluated},
          {"features", r.features},
          {"config",
           {{"max_degree", o.max_degree},
            {"max_delay", o.max_delay},
            {"train_rows", o.train_rows},
            {"test_rows", o.test_rows},
            {"threshold_source", o.threshold ? "fixed" : "surrogate"},
            {"surrogates", o.surrogates},
            {"surrogate_quantile", o.surrogate_quantile},
            {"surrogate_seed", o.surrogate_seed}}}};
}

void write_capacity_csv(const CapacityReport& r, const std::filesystem::path& path) {
  std::string out = "delays,degrees,total_degree,capacity\n";
  for (const auto& t : r.per_target) {
    std::string d, k;
    for (std::size_t i = 0; i < t.spec.terms.size(); ++i) {
      d += (i ? ";" : "") + std::to_string(t.spec.terms[i].delay);
      k += (i ? ";" : "") + std::to_string(t.spec.terms[i].degree);
    }
    out += d + "," + k + "," + std::to_string(t.spec.total_degree()) + "," + format_double(t.capacity) + "\n";
  }
  write_text_file(path, out);
}

}  // namespace kobs
