#include "replica/io.hpp"

#include <fstream>

namespace replica {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw ShapeError("matrix must be a nonempty array");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ShapeError("matrix must be square");
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto& e = row[static_cast<std::size_t>(k)];
      if (e.is_number()) {
        m(i, k) = e.get<double>();
      } else if (e.is_array() && e.size() == 2) {
        m(i, k) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ShapeError("matrix entry must be a number or [re, im]");
      }
    }
  }
  return m;
}

json operator_to_json(const DenseOperator& a) {
  return {{"dims", a.shape().dims()}, {"matrix", matrix_to_json(a.matrix())}};
}

DenseOperator operator_from_json(const json& j) {
  if (j.is_object()) {
    Matrix m = matrix_from_json(j.at("matrix"));
    std::vector<std::size_t> dims;
    if (j.contains("dims"))
      dims = j.at("dims").get<std::vector<std::size_t>>();
    else
      dims = {static_cast<std::size_t>(m.rows())};
    return DenseOperator(RegisterShape(dims), std::move(m));
  }
  Matrix m = matrix_from_json(j);
  RegisterShape shape({static_cast<std::size_t>(m.rows())});
  return DenseOperator(std::move(shape), std::move(m));
}

DenseOperator load_operator(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return operator_from_json(json::parse(in));
}

}  // namespace replica
