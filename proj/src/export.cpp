#include <bit>
#include <cstring>
#include <fstream>

#include "blab/error.hpp"
#include "blab/operators.hpp"
#include "json.hpp"

namespace blab {

namespace {

void put_le(std::ostream& os, double v) {
  unsigned char bytes[8];
  std::memcpy(bytes, &v, 8);
  if constexpr (std::endian::native == std::endian::big)
    for (int i = 0; i < 4; ++i) std::swap(bytes[i], bytes[7 - i]);
  os.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le(std::istream& is) {
  unsigned char bytes[8];
  is.read(reinterpret_cast<char*>(bytes), 8);
  if constexpr (std::endian::native == std::endian::big)
    for (int i = 0; i < 4; ++i) std::swap(bytes[i], bytes[7 - i]);
  double v;
  std::memcpy(&v, bytes, 8);
  return v;
}

}  // namespace

void write_matrix(const std::string& path, const DiscreteOperator& op) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::io, "cannot open " + path + " for writing");
  for (Eigen::Index i = 0; i < op.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < op.matrix.cols(); ++j) put_le(os, op.matrix(i, j));
  if (!os) fail(ErrorKind::io, "write to " + path + " failed");

  const WeightedGrid& g = op.grid;
  nlohmann::ordered_json meta;
  meta["rows"] = op.matrix.rows();
  meta["cols"] = op.matrix.cols();
  meta["dtype"] = "float64";
  meta["byte_order"] = "little";
  meta["layout"] = "row-major";
  meta["diagonal_policy"] = op.diagonal_policy;
  meta["n"] = g.params().n;
  meta["lambda"] = g.params().lambda;
  meta["box"] = {{"lo", g.box().lo}, {"hi", g.box().hi}};
  meta["resolution"] = g.resolution();
  meta["cells"] = g.size();
  meta["node_rule"] = "weighted centroid";
  std::ofstream js(path + ".json");
  if (!js) fail(ErrorKind::io, "cannot open " + path + ".json for writing");
  js << meta.dump(2) << '\n';
}

Eigen::MatrixXd read_matrix(const std::string& path, std::size_t rows, std::size_t cols) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::io, "cannot open " + path);
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = get_le(is);
  if (!is) fail(ErrorKind::io, path + " is shorter than " + std::to_string(rows * cols) + " values");
  return m;
}

void write_singular_values_csv(std::ostream& os, std::span<const double> values) {
  os << "index,value\n";
  os.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) os << i + 1 << ',' << values[i] << '\n';
}

}  // namespace blab
