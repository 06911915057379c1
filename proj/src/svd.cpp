#include <lapacke.h>

#include <algorithm>
#include <cmath>

#include "blab/error.hpp"
#include "blab/operators.hpp"

namespace blab {

std::vector<double> singular_values(const Eigen::MatrixXd& m) {
  if (m.size() == 0) return {};
  for (Eigen::Index i = 0; i < m.size(); ++i)
    require(std::isfinite(m.data()[i]), ErrorKind::numerical, "matrix has non-finite entries");
  Eigen::MatrixXd a = m;  // dgesdd overwrites its input
  const lapack_int rows = static_cast<lapack_int>(a.rows()), cols = static_cast<lapack_int>(a.cols());
  std::vector<double> s(static_cast<std::size_t>(std::min(rows, cols)));
  double dummy = 0.0;
  const lapack_int info =
      LAPACKE_dgesdd(LAPACK_COL_MAJOR, 'N', rows, cols, a.data(), rows, s.data(), &dummy, 1, &dummy, 1);
  if (info != 0) fail(ErrorKind::numerical, "SVD did not converge (info " + std::to_string(info) + ")");
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

std::vector<double> singular_values(const DiscreteOperator& op) { return singular_values(op.matrix); }

double schatten_lorentz(std::span<const double> singular_values, const LorentzParams& lp) {
  return lorentz_norm(singular_values, lp);
}

}  // namespace blab
