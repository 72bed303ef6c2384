#pragma once

#include <vector>

#include "subheat/grid.hpp"
#include "subheat/group.hpp"

namespace subheat {

// Partial derivative along one grid axis. Central differences at interior
// nodes, one-sided three-point formulas at the two ends of every line; both
// are second order.
Field derivative_along(const Field& u, int axis);

// Applies the horizontal field X_{j+1} of the group to u.
Field apply_vector_field(const GroupSpec& group, const Field& u, int j);

// Horizontal gradient (X_1 u, ..., X_{N1} u).
std::vector<Field> horizontal_gradient(const GroupSpec& group, const Field& u);

// Horizontal divergence sum_j X_j F_j of an N1-component field.
Field horizontal_divergence(const GroupSpec& group, const std::vector<Field>& components);

// Pointwise euclidean norm of a component list.
Field pointwise_norm(const std::vector<Field>& components);

}  // namespace subheat
