#include "mlswe/metrics.hpp"

#include <cmath>

#include "mlswe/errors.hpp"

namespace mlswe {

namespace {

struct RelativeNorms {
  double l2_num = 0.0, l2_den = 0.0;
  double linf_num = 0.0, linf_den = 0.0;

  void add(double value, double ref, double weight = 1.0) {
    const double d = value - ref;
    l2_num += weight * d * d;
    l2_den += weight * ref * ref;
    linf_num = std::max(linf_num, std::abs(d));
    linf_den = std::max(linf_den, std::abs(ref));
  }
  double l2() const { return l2_den > 0.0 ? std::sqrt(l2_num / l2_den) : std::sqrt(l2_num); }
  double linf() const { return linf_den > 0.0 ? linf_num / linf_den : linf_num; }
};

}  // namespace

ErrorReport compute_errors(const Grid1D& grid, const LayerLayout& layout,
                           const State& solution, const State& reference) {
  if (solution.eta.size() != reference.eta.size() ||
      solution.u.size() != reference.u.size()) {
    throw ConfigError("solution and reference states have mismatched shapes");
  }

  RelativeNorms eta, u, bed;
  for (int i = 0; i < grid.cells; ++i) {
    eta.add(solution.eta[i], reference.eta[i]);
    bed.add(solution.bed[i], reference.bed[i]);
  }
  for (int i = 0; i < grid.cells; ++i) {
    const int e = i + 1;
    const LayerScheme& s = layout.edge_scheme(e);
    const int off = layout.edge_offset(e);
    const double h_ref = reference.eta[i] - reference.bed[i];
    for (int a = 0; a < s.count; ++a) {
      const double weight = grid.dx[i] * s.fractions[a] * h_ref;
      u.add(solution.u[off + a], reference.u[off + a], weight);
    }
  }

  ErrorReport rep;
  rep.eta_l2 = eta.l2();
  rep.eta_linf = eta.linf();
  rep.u_l2 = u.l2();
  rep.u_linf = u.linf();
  rep.bed_l2 = bed.l2();
  rep.bed_linf = bed.linf();
  return rep;
}

}  // namespace mlswe
