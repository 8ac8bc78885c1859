#pragma once

#include <span>
#include <vector>

namespace mlswe {

/// Three-band linear system. lower[0] and upper[n-1] are ignored.
struct TridiagonalSystem {
  std::vector<double> lower;
  std::vector<double> diag;
  std::vector<double> upper;
  std::vector<double> rhs;

  int size() const { return static_cast<int>(diag.size()); }
  void resize(int n) {
    lower.assign(n, 0.0);
    diag.assign(n, 0.0);
    upper.assign(n, 0.0);
    rhs.assign(n, 0.0);
  }
};

/// Thomas algorithm without pivoting; valid for the diagonally dominant
/// systems assembled here. Throws SingularSystemError on a vanishing pivot.
/// `scratch` must have at least n entries.
void thomas_solve(std::span<const double> lower, std::span<const double> diag,
                  std::span<const double> upper, std::span<const double> rhs,
                  std::span<double> x, std::span<double> scratch);

std::vector<double> thomas_solve(const TridiagonalSystem& sys);

/// Max-norm residual ||A x - rhs||_inf.
double tridiagonal_residual(const TridiagonalSystem& sys, std::span<const double> x);

}  // namespace mlswe
