#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace subheat {

// Uniform axis-aligned box grid. Nodes sit at lower + i*h per axis, boundary
// nodes are the outermost layer. Spacing is shared by all axes.
class Grid {
 public:
  Grid() = default;
  Grid(std::vector<double> lower, std::vector<int> extents, double spacing);

  // Builds a grid from both corners, validating that extents and spacing are
  // consistent across axes.
  static Grid from_corners(const std::vector<double>& lower,
                           const std::vector<double>& upper,
                           const std::vector<int>& extents);

  int dim() const { return static_cast<int>(extents_.size()); }
  int extent(int axis) const { return extents_[static_cast<size_t>(axis)]; }
  const std::vector<int>& extents() const { return extents_; }
  double spacing() const { return spacing_; }
  double lower(int axis) const { return lower_[static_cast<size_t>(axis)]; }
  double upper(int axis) const {
    return lower_[static_cast<size_t>(axis)] +
           spacing_ * (extents_[static_cast<size_t>(axis)] - 1);
  }
  std::size_t node_count() const;
  std::size_t stride(int axis) const { return strides_[static_cast<size_t>(axis)]; }

  std::size_t flat_index(std::span<const int> idx) const;
  double coordinate(int axis, int i) const {
    return lower_[static_cast<size_t>(axis)] + spacing_ * i;
  }
  bool index_on_boundary(std::span<const int> idx) const;

  bool operator==(const Grid&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<int> extents_;
  double spacing_ = 0.0;
  std::vector<std::size_t> strides_;  // row-major, last axis contiguous
};

// Scalar values attached to every node of a grid.
class Field {
 public:
  Field() = default;
  explicit Field(Grid grid, double value = 0.0);

  template <typename F>
  static Field sample(const Grid& grid, F&& fn);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double at(std::span<const int> idx) const { return values_[grid_.flat_index(idx)]; }
  double* data() { return values_.data(); }
  const double* data() const { return values_.data(); }

  double sup_norm() const;
  double min_value() const;
  double max_value() const;
  bool all_finite() const;
  // Zeroes every boundary node.
  void enforce_dirichlet();
  bool same_grid(const Field& other) const { return grid_ == other.grid_; }

 private:
  Grid grid_;
  std::vector<double> values_;
};

// Visits every node in flat order. fn receives (flat index, multi-index,
// node coordinates); the spans stay owned by the iteration.
template <typename F>
void for_each_node(const Grid& g, F&& fn) {
  const int d = g.dim();
  std::vector<int> idx(static_cast<size_t>(d), 0);
  std::vector<double> x(static_cast<size_t>(d));
  for (int a = 0; a < d; ++a) x[static_cast<size_t>(a)] = g.lower(a);
  const std::size_t n = g.node_count();
  for (std::size_t flat = 0; flat < n; ++flat) {
    fn(flat, std::span<const int>(idx), std::span<const double>(x));
    for (int a = d - 1; a >= 0; --a) {
      auto ua = static_cast<size_t>(a);
      if (++idx[ua] < g.extent(a)) {
        x[ua] = g.coordinate(a, idx[ua]);
        break;
      }
      idx[ua] = 0;
      x[ua] = g.lower(a);
    }
  }
}

template <typename F>
Field Field::sample(const Grid& grid, F&& fn) {
  Field out(grid);
  for_each_node(grid, [&](std::size_t flat, std::span<const int>,
                          std::span<const double> x) { out[flat] = fn(x); });
  return out;
}

}  // namespace subheat
