#pragma once

#include <vector>

namespace subheat {

// One correction term of a left-invariant vector field: the field picks up
// factor * x[coordinate_axis] * d/dx[derivative_axis] on top of its own
// partial derivative. Linear coefficients cover step-2 groups; richer strata
// would need polynomial terms here.
struct LinearCoefficient {
  int derivative_axis = 0;
  int coordinate_axis = 0;
  double factor = 0.0;

  bool operator==(const LinearCoefficient&) const = default;
};

// A stratified group presented through its generating horizontal frame
// X_1..X_{N1} acting on R^N. Axis j of the first stratum carries
//   X_j = d_j + sum of LinearCoefficient terms,
// with the terms differentiating only higher-stratum axes.
struct GroupSpec {
  int total_dimension = 0;
  int first_stratum_dimension = 0;
  std::vector<int> stratum_sizes;
  // field_terms[j] lists the correction terms of X_{j+1}.
  std::vector<std::vector<LinearCoefficient>> field_terms;

  void validate() const;

  bool operator==(const GroupSpec&) const = default;
};

// Abelian backend: X_j = d_j on R^n1, single stratum.
GroupSpec make_euclidean(int n1);

// First Heisenberg group on R^3 with
//   X_1 = d_1 - (x_2/2) d_3,   X_2 = d_2 + (x_1/2) d_3,
// so [X_1, X_2] = d_3 spans the second stratum.
GroupSpec make_heisenberg();

}  // namespace subheat
