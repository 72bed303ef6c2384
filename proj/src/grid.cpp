#include "subheat/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subheat {

Grid::Grid(std::vector<double> lower, std::vector<int> extents, double spacing)
    : lower_(std::move(lower)), extents_(std::move(extents)), spacing_(spacing) {
  if (extents_.empty()) throw std::invalid_argument("grid needs at least one axis");
  if (lower_.size() != extents_.size())
    throw std::invalid_argument("grid corner dimension does not match extents");
  if (!(spacing_ > 0.0) || !std::isfinite(spacing_))
    throw std::invalid_argument("grid spacing must be positive and finite");
  for (int e : extents_) {
    // Every stencil in use needs three nodes per line.
    if (e < 3) throw std::invalid_argument("grid extent must be at least 3 per axis");
  }
  strides_.assign(extents_.size(), 1);
  for (int a = static_cast<int>(extents_.size()) - 2; a >= 0; --a) {
    auto ua = static_cast<size_t>(a);
    strides_[ua] = strides_[ua + 1] * static_cast<size_t>(extents_[ua + 1]);
  }
}

Grid Grid::from_corners(const std::vector<double>& lower,
                        const std::vector<double>& upper,
                        const std::vector<int>& extents) {
  if (lower.size() != upper.size() || lower.size() != extents.size())
    throw std::invalid_argument("corner/extent dimension mismatch");
  if (extents.empty()) throw std::invalid_argument("grid needs at least one axis");
  double h = 0.0;
  for (size_t a = 0; a < extents.size(); ++a) {
    if (extents[a] < 3) throw std::invalid_argument("grid extent must be at least 3 per axis");
    const double ha = (upper[a] - lower[a]) / (extents[a] - 1);
    if (!(ha > 0.0)) throw std::invalid_argument("upper corner must exceed lower corner");
    if (a == 0) {
      h = ha;
    } else if (std::abs(ha - h) > 1e-9 * std::max(std::abs(h), 1.0)) {
      throw std::invalid_argument("corners imply non-uniform spacing across axes");
    }
  }
  return Grid(lower, extents, h);
}

std::size_t Grid::node_count() const {
  std::size_t n = 1;
  for (int e : extents_) n *= static_cast<std::size_t>(e);
  return n;
}

std::size_t Grid::flat_index(std::span<const int> idx) const {
  if (idx.size() != extents_.size())
    throw std::invalid_argument("multi-index dimension mismatch");
  std::size_t flat = 0;
  for (size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] < 0 || idx[a] >= extents_[a])
      throw std::out_of_range("multi-index outside grid");
    flat += static_cast<std::size_t>(idx[a]) * strides_[a];
  }
  return flat;
}

bool Grid::index_on_boundary(std::span<const int> idx) const {
  for (size_t a = 0; a < idx.size(); ++a) {
    if (idx[a] == 0 || idx[a] == extents_[a] - 1) return true;
  }
  return false;
}

Field::Field(Grid grid, double value)
    : grid_(std::move(grid)), values_(grid_.node_count(), value) {}

double Field::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double Field::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::min(m, v);
  return m;
}

double Field::max_value() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

bool Field::all_finite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void Field::enforce_dirichlet() {
  for_each_node(grid_, [&](std::size_t flat, std::span<const int> idx,
                           std::span<const double>) {
    if (grid_.index_on_boundary(idx)) values_[flat] = 0.0;
  });
}

}  // namespace subheat
