#pragma once

#include <span>
#include <utility>
#include <vector>

#include "mlswe/grid.hpp"

namespace mlswe {

/// One distinct vertical subdivision: N layers with fixed thickness
/// fractions l_alpha > 0 summing to one.
struct LayerScheme {
  int count = 0;
  std::vector<double> fractions;   ///< size N
  std::vector<double> cumulative;  ///< partial sums, size N+1, cumulative[0]=0, [N]=1
  std::vector<double> log_cumulative;  ///< ln(cumulative[k]) for k >= 1 (index k-1)
  std::vector<double> half_fraction;  ///< (l_a + l_{a+1})/2 per interior interface, size N-1
};

/// Nesting map between two schemes meeting at a transition cell. Each coarse
/// layer b covers the contiguous fine range [ranges[b].first, ranges[b].second].
struct TransitionMap {
  int coarse_scheme = -1;
  int fine_scheme = -1;
  std::vector<std::pair<int, int>> ranges;  ///< per coarse layer, inclusive 0-based
  std::vector<int> fine_to_coarse;          ///< size N_fine
};

/// Region request for build_layout: edges with x_lo <= x_edge <= x_hi get
/// `layers` layers with the given fractions (empty = uniform). Later regions
/// win where regions overlap.
struct LayerRegion {
  double x_lo = 0.0;
  double x_hi = 0.0;
  int layers = 0;
  std::vector<double> fractions;
};

/// Per-edge vertical layer layout with the derived cell-center layout and the
/// precomputed transition maps. Immutable after construction.
class LayerLayout {
 public:
  LayerLayout() = default;
  LayerLayout(const Grid1D& grid, std::vector<LayerScheme> schemes,
              std::vector<int> edge_scheme);

  int edge_count(int e) const { return schemes_[edge_scheme_[e]].count; }
  int cell_count(int i) const { return schemes_[cell_scheme_[i]].count; }
  int edge_scheme_id(int e) const { return edge_scheme_[e]; }
  int cell_scheme_id(int i) const { return cell_scheme_[i]; }
  const LayerScheme& scheme(int id) const { return schemes_[id]; }
  const LayerScheme& edge_scheme(int e) const { return schemes_[edge_scheme_[e]]; }
  const LayerScheme& cell_scheme(int i) const { return schemes_[cell_scheme_[i]]; }

  /// Offset of edge e's column in a flattened per-edge-per-layer array.
  int edge_offset(int e) const { return edge_offset_[e]; }
  /// Offset of edge e's interior interfaces in a flattened per-interface array.
  int interface_offset(int e) const { return interface_offset_[e]; }
  /// Offset of cell i's column in a flattened per-cell-per-layer array.
  int cell_offset(int i) const { return cell_offset_[i]; }

  int edge_values() const { return edge_offset_.back(); }
  int interface_values() const { return interface_offset_.back(); }
  int cell_values() const { return cell_offset_.back(); }
  int max_edge_count() const { return max_edge_count_; }
  int max_cell_count() const { return max_cell_count_; }

  /// Degrees of freedom of the discrete system: M + sum of per-edge counts.
  long long dof() const;

  /// Map between two scheme ids; null when schemes coincide.
  const TransitionMap* find_transition(int scheme_a, int scheme_b) const;

  /// Re-express a per-layer column from one scheme in another. Aggregates by
  /// fraction-weighted means when the target is coarser, copies the containing
  /// coarse value when finer. No-op copy for identical schemes.
  void map_column(int from_scheme, int to_scheme, std::span<const double> in,
                  std::span<double> out) const;

  /// Check all structural invariants; throws LayoutError on violation.
  /// Construction always validates, so this never fails on a built layout.
  void validate(const Grid1D& grid) const;

  int edges() const { return static_cast<int>(edge_scheme_.size()); }
  int cells() const { return static_cast<int>(cell_scheme_.size()); }

 private:
  std::vector<LayerScheme> schemes_;
  std::vector<int> edge_scheme_;
  std::vector<int> cell_scheme_;
  std::vector<int> edge_offset_;
  std::vector<int> interface_offset_;
  std::vector<int> cell_offset_;
  std::vector<TransitionMap> transitions_;
  int max_edge_count_ = 0;
  int max_cell_count_ = 0;
};

/// Assign layer schemes to edges from region specs and build the derived
/// layout. Throws LayoutError when a region leaves edges uncovered, fractions
/// do not sum to one, or the compatibility/adjacency rules fail.
LayerLayout build_layout(const Grid1D& grid, const std::vector<LayerRegion>& regions);

/// Fraction-weighted mean of fine-layer values over the inclusive index range
/// covered by one coarse layer.
double aggregate_velocity(std::span<const double> values, std::span<const double> fractions,
                          std::pair<int, int> range);

}  // namespace mlswe
