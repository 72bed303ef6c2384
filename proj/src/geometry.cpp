#include "subheat/geometry.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace subheat {

Field derivative_along(const Field& u, int axis) {
  const Grid& g = u.grid();
  if (axis < 0 || axis >= g.dim())
    throw std::invalid_argument("derivative axis outside grid dimension");
  const int n = g.extent(axis);
  const std::size_t s = g.stride(axis);
  const double inv2h = 1.0 / (2.0 * g.spacing());

  Field out(g);
  const double* in = u.data();
  double* d = out.data();
  const std::size_t total = g.node_count();
  // Walk every line parallel to `axis`. A flat index starts a line when its
  // component along the axis is zero.
  for (std::size_t base = 0; base < total; ++base) {
    if ((base / s) % static_cast<std::size_t>(n) != 0) continue;
    const std::size_t last = base + static_cast<std::size_t>(n - 1) * s;
    d[base] = (-3.0 * in[base] + 4.0 * in[base + s] - in[base + 2 * s]) * inv2h;
    for (std::size_t k = base + s; k < last; k += s) {
      d[k] = (in[k + s] - in[k - s]) * inv2h;
    }
    d[last] = (3.0 * in[last] - 4.0 * in[last - s] + in[last - 2 * s]) * inv2h;
  }
  return out;
}

namespace {

// Derivative cache so shared axes are swept once per input field.
class DerivativeCache {
 public:
  explicit DerivativeCache(const Field& u)
      : u_(u), cache_(static_cast<size_t>(u.grid().dim())) {}

  const Field& get(int axis) {
    auto& slot = cache_[static_cast<size_t>(axis)];
    if (!slot) slot = derivative_along(u_, axis);
    return *slot;
  }

 private:
  const Field& u_;
  std::vector<std::optional<Field>> cache_;
};

Field apply_field_cached(const GroupSpec& group, const Field& u, int j,
                         DerivativeCache& cache) {
  const Grid& g = u.grid();
  Field out = cache.get(j);
  for (const auto& term : group.field_terms[static_cast<size_t>(j)]) {
    const Field& da = cache.get(term.derivative_axis);
    const double factor = term.factor;
    const int coord = term.coordinate_axis;
    for_each_node(g, [&](std::size_t flat, std::span<const int>,
                         std::span<const double> x) {
      out[flat] += factor * x[static_cast<size_t>(coord)] * da[flat];
    });
  }
  return out;
}

void check_group_grid(const GroupSpec& group, const Grid& grid) {
  group.validate();
  if (grid.dim() != group.total_dimension)
    throw std::invalid_argument("grid dimension does not match group dimension");
}

}  // namespace

Field apply_vector_field(const GroupSpec& group, const Field& u, int j) {
  check_group_grid(group, u.grid());
  if (j < 0 || j >= group.first_stratum_dimension)
    throw std::invalid_argument("horizontal field index out of range");
  DerivativeCache cache(u);
  return apply_field_cached(group, u, j, cache);
}

std::vector<Field> horizontal_gradient(const GroupSpec& group, const Field& u) {
  check_group_grid(group, u.grid());
  DerivativeCache cache(u);
  std::vector<Field> grad;
  grad.reserve(static_cast<size_t>(group.first_stratum_dimension));
  for (int j = 0; j < group.first_stratum_dimension; ++j) {
    grad.push_back(apply_field_cached(group, u, j, cache));
  }
  return grad;
}

Field horizontal_divergence(const GroupSpec& group, const std::vector<Field>& components) {
  if (components.size() != static_cast<size_t>(group.first_stratum_dimension))
    throw std::invalid_argument("component count does not match horizontal dimension");
  check_group_grid(group, components.front().grid());
  for (const auto& c : components) {
    if (!c.same_grid(components.front()))
      throw std::invalid_argument("divergence components live on different grids");
  }
  Field out(components.front().grid());
  for (int j = 0; j < group.first_stratum_dimension; ++j) {
    DerivativeCache cache(components[static_cast<size_t>(j)]);
    Field xj = apply_field_cached(group, components[static_cast<size_t>(j)], j, cache);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += xj[i];
  }
  return out;
}

Field pointwise_norm(const std::vector<Field>& components) {
  if (components.empty()) throw std::invalid_argument("empty component list");
  Field out(components.front().grid());
  for (const auto& c : components) {
    if (!c.same_grid(components.front()))
      throw std::invalid_argument("norm components live on different grids");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += c[i] * c[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::sqrt(out[i]);
  return out;
}

}  // namespace subheat
