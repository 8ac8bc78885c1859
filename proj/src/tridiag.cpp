#include "mlswe/tridiag.hpp"

#include <cmath>
#include <string>

#include "mlswe/errors.hpp"

namespace mlswe {

void thomas_solve(std::span<const double> lower, std::span<const double> diag,
                  std::span<const double> upper, std::span<const double> rhs,
                  std::span<double> x, std::span<double> scratch) {
  const int n = static_cast<int>(diag.size());
  if (n == 0) return;

  auto check_pivot = [](double pivot, double scale, int row) {
    if (!(std::abs(pivot) > 1e-14 * scale) || !std::isfinite(pivot)) {
      throw SingularSystemError("vanishing pivot in row " + std::to_string(row));
    }
  };

  double pivot = diag[0];
  check_pivot(pivot, std::abs(diag[0]) + (n > 1 ? std::abs(upper[0]) : 0.0) + 1e-300, 0);
  scratch[0] = n > 1 ? upper[0] / pivot : 0.0;
  x[0] = rhs[0] / pivot;
  for (int i = 1; i < n; ++i) {
    pivot = diag[i] - lower[i] * scratch[i - 1];
    check_pivot(pivot, std::abs(diag[i]) + std::abs(lower[i]) + std::abs(upper[i]) + 1e-300, i);
    scratch[i] = i + 1 < n ? upper[i] / pivot : 0.0;
    x[i] = (rhs[i] - lower[i] * x[i - 1]) / pivot;
  }
  for (int i = n - 2; i >= 0; --i) {
    x[i] -= scratch[i] * x[i + 1];
  }
}

std::vector<double> thomas_solve(const TridiagonalSystem& sys) {
  std::vector<double> x(sys.size());
  std::vector<double> scratch(sys.size());
  thomas_solve(sys.lower, sys.diag, sys.upper, sys.rhs, x, scratch);
  return x;
}

double tridiagonal_residual(const TridiagonalSystem& sys, std::span<const double> x) {
  const int n = sys.size();
  double res = 0.0;
  for (int i = 0; i < n; ++i) {
    double ax = sys.diag[i] * x[i];
    if (i > 0) ax += sys.lower[i] * x[i - 1];
    if (i + 1 < n) ax += sys.upper[i] * x[i + 1];
    res = std::max(res, std::abs(ax - sys.rhs[i]));
  }
  return res;
}

}  // namespace mlswe
