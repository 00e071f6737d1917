#include "kobs/serialize.hpp"

#include <stdexcept>

namespace kobs {

nlohmann::json matrix_to_json(const ComplexMatrix& m, const std::string& label) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix_to_json: matrix must be square");
  const Eigen::Index n = m.rows();
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(n * n));
  im.reserve(static_cast<std::size_t>(n * n));
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return nlohmann::json{{"dim", n}, {"label", label}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j, std::string* label) {
  const auto n = j.at("dim").get<Eigen::Index>();
  const auto re = j.at("re").get<std::vector<double>>();
  const auto im = j.at("im").get<std::vector<double>>();
  if (n <= 0 || re.size() != static_cast<std::size_t>(n * n) || im.size() != re.size()) {
    throw std::invalid_argument("matrix_from_json: 're'/'im' must hold dim*dim entries");
  }
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto k = static_cast<std::size_t>(r * n + c);
      m(r, c) = Complex(re[k], im[k]);
    }
  }
  if (label) *label = j.value("label", std::string{});
  return m;
}

nlohmann::json to_json(const HermitianOperator& op) { return matrix_to_json(op.matrix(), op.label()); }

nlohmann::json to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix(), "rho"); }

HermitianOperator operator_from_json(const nlohmann::json& j) {
  std::string label;
  ComplexMatrix m = matrix_from_json(j, &label);
  return HermitianOperator(std::move(m), std::move(label));
}

DensityMatrix density_from_json(const nlohmann::json& j) { return DensityMatrix(matrix_from_json(j)); }

}  // namespace kobs
