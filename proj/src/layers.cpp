#include "mlswe/layers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "mlswe/errors.hpp"

namespace mlswe {

namespace {

constexpr double kFractionTol = 1e-12;

LayerScheme make_scheme(int count, std::vector<double> fractions) {
  if (count < 1) {
    throw LayoutError("layer count must be positive, got " + std::to_string(count));
  }
  if (fractions.empty()) {
    fractions.assign(count, 1.0 / count);
  }
  if (static_cast<int>(fractions.size()) != count) {
    throw LayoutError("expected " + std::to_string(count) + " layer fractions, got " +
                      std::to_string(fractions.size()));
  }
  double sum = 0.0;
  for (double f : fractions) {
    if (!(f > 0.0)) throw LayoutError("layer fractions must be positive");
    sum += f;
  }
  if (std::abs(sum - 1.0) > kFractionTol) {
    throw LayoutError("layer fractions sum to " + std::to_string(sum) + ", expected 1");
  }
  for (double& f : fractions) f /= sum;

  LayerScheme s;
  s.count = count;
  s.fractions = std::move(fractions);
  s.cumulative.resize(count + 1);
  s.cumulative[0] = 0.0;
  for (int a = 0; a < count; ++a) s.cumulative[a + 1] = s.cumulative[a] + s.fractions[a];
  s.cumulative[count] = 1.0;
  s.log_cumulative.resize(count);
  for (int a = 0; a < count; ++a) s.log_cumulative[a] = std::log(s.cumulative[a + 1]);
  s.half_fraction.resize(count > 1 ? count - 1 : 0);
  for (int a = 0; a + 1 < count; ++a) {
    s.half_fraction[a] = 0.5 * (s.fractions[a] + s.fractions[a + 1]);
  }
  return s;
}

bool same_scheme(const LayerScheme& a, const LayerScheme& b) {
  if (a.count != b.count) return false;
  for (int i = 0; i < a.count; ++i) {
    if (std::abs(a.fractions[i] - b.fractions[i]) > kFractionTol) return false;
  }
  return true;
}

/// Build the nesting map coarse->fine; throws LayoutError if the coarse
/// fractions are not exact sums of contiguous fine fractions.
TransitionMap make_transition(const std::vector<LayerScheme>& schemes, int coarse_id,
                              int fine_id, const std::string& where) {
  const LayerScheme& coarse = schemes[coarse_id];
  const LayerScheme& fine = schemes[fine_id];
  TransitionMap map;
  map.coarse_scheme = coarse_id;
  map.fine_scheme = fine_id;
  map.ranges.resize(coarse.count);
  map.fine_to_coarse.resize(fine.count);

  // The coarse cumulative fractions must be a subset of the fine ones.
  int a = 0;  // fine cursor
  for (int b = 0; b < coarse.count; ++b) {
    const int lo = a;
    const double target = coarse.cumulative[b + 1];
    while (a < fine.count && fine.cumulative[a + 1] < target - kFractionTol) {
      map.fine_to_coarse[a] = b;
      ++a;
    }
    if (a >= fine.count || std::abs(fine.cumulative[a + 1] - target) > kFractionTol) {
      throw LayoutError("incompatible layer fractions at " + where + ": coarse layer " +
                        std::to_string(b + 1) +
                        " does not close on a fine layer interface");
    }
    map.fine_to_coarse[a] = b;
    ++a;
    map.ranges[b] = {lo, a - 1};
  }
  if (a != fine.count) {
    throw LayoutError("incompatible layer fractions at " + where +
                      ": fine layers left over");
  }
  return map;
}

}  // namespace

LayerLayout::LayerLayout(const Grid1D& grid, std::vector<LayerScheme> schemes,
                         std::vector<int> edge_scheme)
    : schemes_(std::move(schemes)), edge_scheme_(std::move(edge_scheme)) {
  const int m = grid.cells;
  assert(static_cast<int>(edge_scheme_.size()) == m + 1);

  // Adjacency rule: a cell whose edges differ must be flanked by repeats.
  for (int i = 0; i < m; ++i) {
    const int sl = edge_scheme_[i];
    const int sr = edge_scheme_[i + 1];
    if (sl == sr) continue;
    if (i > 0 && edge_scheme_[i - 1] != sl) {
      throw LayoutError("layer count changes too fast near edge " + std::to_string(i) +
                        ": the edge left of a transition cell must repeat its count");
    }
    if (i + 2 <= m && edge_scheme_[i + 2] != sr) {
      throw LayoutError("layer count changes too fast near edge " + std::to_string(i + 1) +
                        ": the edge right of a transition cell must repeat its count");
    }
    if (i == 0 || i + 1 == m) {
      throw LayoutError("layer transition not allowed in a boundary cell (cell " +
                        std::to_string(i) + ")");
    }
  }

  // Cell scheme: the side with more layers wins.
  cell_scheme_.resize(m);
  for (int i = 0; i < m; ++i) {
    const int sl = edge_scheme_[i];
    const int sr = edge_scheme_[i + 1];
    cell_scheme_[i] = schemes_[sl].count >= schemes_[sr].count ? sl : sr;
  }

  // Transition maps, one per distinct scheme pair met at a transition cell.
  for (int i = 0; i < m; ++i) {
    const int sl = edge_scheme_[i];
    const int sr = edge_scheme_[i + 1];
    if (sl == sr) continue;
    if (schemes_[sl].count == schemes_[sr].count) {
      throw LayoutError("adjacent edges of cell " + std::to_string(i) +
                        " have equal layer counts but different fractions");
    }
    const int coarse = schemes_[sl].count < schemes_[sr].count ? sl : sr;
    const int fine = coarse == sl ? sr : sl;
    if (find_transition(coarse, fine) == nullptr) {
      transitions_.push_back(
          make_transition(schemes_, coarse, fine, "cell " + std::to_string(i)));
    }
  }

  edge_offset_.resize(m + 2);
  interface_offset_.resize(m + 2);
  edge_offset_[0] = 0;
  interface_offset_[0] = 0;
  for (int e = 0; e <= m; ++e) {
    edge_offset_[e + 1] = edge_offset_[e] + edge_count(e);
    interface_offset_[e + 1] = interface_offset_[e] + (edge_count(e) - 1);
  }
  cell_offset_.resize(m + 1);
  cell_offset_[0] = 0;
  for (int i = 0; i < m; ++i) cell_offset_[i + 1] = cell_offset_[i] + cell_count(i);

  max_edge_count_ = 0;
  for (int e = 0; e <= m; ++e) max_edge_count_ = std::max(max_edge_count_, edge_count(e));
  max_cell_count_ = 0;
  for (int i = 0; i < m; ++i) max_cell_count_ = std::max(max_cell_count_, cell_count(i));

  validate(grid);
}

long long LayerLayout::dof() const {
  long long dof = cells();
  for (int e = 0; e < edges(); ++e) dof += edge_count(e);
  return dof;
}

const TransitionMap* LayerLayout::find_transition(int scheme_a, int scheme_b) const {
  for (const TransitionMap& t : transitions_) {
    if ((t.coarse_scheme == scheme_a && t.fine_scheme == scheme_b) ||
        (t.coarse_scheme == scheme_b && t.fine_scheme == scheme_a)) {
      return &t;
    }
  }
  return nullptr;
}

void LayerLayout::map_column(int from_scheme, int to_scheme, std::span<const double> in,
                             std::span<double> out) const {
  if (from_scheme == to_scheme) {
    std::copy(in.begin(), in.end(), out.begin());
    return;
  }
  const TransitionMap* map = find_transition(from_scheme, to_scheme);
  if (map == nullptr) {
    throw LayoutError("no transition map between schemes " + std::to_string(from_scheme) +
                      " and " + std::to_string(to_scheme));
  }
  const LayerScheme& fine = schemes_[map->fine_scheme];
  if (map->fine_scheme == from_scheme) {
    // Aggregate fine values into coarse layers.
    for (int b = 0; b < static_cast<int>(map->ranges.size()); ++b) {
      out[b] = aggregate_velocity(in, fine.fractions, map->ranges[b]);
    }
  } else {
    // Each fine layer inherits the value of its containing coarse layer.
    for (int a = 0; a < fine.count; ++a) out[a] = in[map->fine_to_coarse[a]];
  }
}

void LayerLayout::validate(const Grid1D& grid) const {
  if (edges() != grid.cells + 1 || cells() != grid.cells) {
    throw LayoutError("layout does not match grid size");
  }
  for (const LayerScheme& s : schemes_) {
    double sum = 0.0;
    for (double f : s.fractions) {
      if (!(f > 0.0)) throw LayoutError("non-positive layer fraction");
      sum += f;
    }
    if (std::abs(sum - 1.0) > kFractionTol) {
      throw LayoutError("layer fractions sum to " + std::to_string(sum));
    }
  }
  for (int i = 0; i < cells(); ++i) {
    const int sl = edge_scheme_[i];
    const int sr = edge_scheme_[i + 1];
    if (sl != sr) {
      if (i > 0 && edge_scheme_[i - 1] != sl) {
        throw LayoutError("adjacency rule violated at cell " + std::to_string(i));
      }
      if (i + 2 <= cells() && edge_scheme_[i + 2] != sr) {
        throw LayoutError("adjacency rule violated at cell " + std::to_string(i));
      }
      const int coarse = schemes_[sl].count < schemes_[sr].count ? sl : sr;
      const int fine = coarse == sl ? sr : sl;
      const TransitionMap* map = find_transition(coarse, fine);
      if (map == nullptr) {
        throw LayoutError("missing transition map at cell " + std::to_string(i));
      }
      // Compatibility: each coarse fraction equals the sum of its fine range.
      for (int b = 0; b < schemes_[coarse].count; ++b) {
        double acc = 0.0;
        for (int a = map->ranges[b].first; a <= map->ranges[b].second; ++a) {
          acc += schemes_[fine].fractions[a];
        }
        if (std::abs(acc - schemes_[coarse].fractions[b]) > kFractionTol) {
          throw LayoutError("compatibility violated at cell " + std::to_string(i) +
                            ", coarse layer " + std::to_string(b + 1));
        }
      }
    }
    const int expect = schemes_[sl].count >= schemes_[sr].count ? sl : sr;
    if (cell_scheme_[i] != expect) {
      throw LayoutError("cell scheme mismatch at cell " + std::to_string(i));
    }
  }
}

LayerLayout build_layout(const Grid1D& grid, const std::vector<LayerRegion>& regions) {
  if (regions.empty()) throw LayoutError("no layer regions given");

  std::vector<LayerScheme> schemes;
  std::vector<int> region_scheme(regions.size());
  for (std::size_t r = 0; r < regions.size(); ++r) {
    LayerScheme s = make_scheme(regions[r].layers, regions[r].fractions);
    int id = -1;
    for (std::size_t k = 0; k < schemes.size(); ++k) {
      if (same_scheme(schemes[k], s)) {
        id = static_cast<int>(k);
        break;
      }
    }
    if (id < 0) {
      id = static_cast<int>(schemes.size());
      schemes.push_back(std::move(s));
    }
    region_scheme[r] = id;
  }

  const double tol = 1e-9 * std::max(1.0, grid.x_end - grid.x_start);
  std::vector<int> edge_scheme(grid.edges(), -1);
  for (int e = 0; e < grid.edges(); ++e) {
    const double x = grid.x_edge[e];
    for (std::size_t r = 0; r < regions.size(); ++r) {
      if (x >= regions[r].x_lo - tol && x <= regions[r].x_hi + tol) {
        edge_scheme[e] = region_scheme[r];  // later regions win
      }
    }
    if (edge_scheme[e] < 0) {
      throw LayoutError("no layer region covers edge at x = " + std::to_string(x));
    }
  }

  return LayerLayout(grid, std::move(schemes), std::move(edge_scheme));
}

double aggregate_velocity(std::span<const double> values, std::span<const double> fractions,
                          std::pair<int, int> range) {
  if (range.first > range.second || range.first < 0 ||
      range.second >= static_cast<int>(values.size())) {
    throw std::logic_error("aggregate_velocity: empty or out-of-bounds layer range");
  }
  double weighted = 0.0;
  double weight = 0.0;
  for (int a = range.first; a <= range.second; ++a) {
    weighted += fractions[a] * values[a];
    weight += fractions[a];
  }
  return weighted / weight;
}

}  // namespace mlswe
