#include "subheat/group.hpp"

#include <numeric>
#include <stdexcept>

namespace subheat {

void GroupSpec::validate() const {
  if (first_stratum_dimension < 1)
    throw std::invalid_argument("group needs at least one horizontal direction");
  if (total_dimension < first_stratum_dimension)
    throw std::invalid_argument("total dimension below first stratum dimension");
  if (stratum_sizes.empty() || stratum_sizes.front() != first_stratum_dimension)
    throw std::invalid_argument("first stratum size mismatch");
  const int sum = std::accumulate(stratum_sizes.begin(), stratum_sizes.end(), 0);
  if (sum != total_dimension)
    throw std::invalid_argument("stratum sizes do not sum to total dimension");
  for (int s : stratum_sizes) {
    if (s < 1) throw std::invalid_argument("empty stratum");
  }
  if (field_terms.size() != static_cast<size_t>(first_stratum_dimension))
    throw std::invalid_argument("need one term list per horizontal field");
  for (const auto& terms : field_terms) {
    for (const auto& t : terms) {
      if (t.derivative_axis < first_stratum_dimension || t.derivative_axis >= total_dimension)
        throw std::invalid_argument("correction term must differentiate a higher stratum axis");
      if (t.coordinate_axis < 0 || t.coordinate_axis >= t.derivative_axis)
        throw std::invalid_argument("correction coefficient must depend on lower strata only");
    }
  }
}

GroupSpec make_euclidean(int n1) {
  if (n1 < 1) throw std::invalid_argument("euclidean backend needs dimension >= 1");
  GroupSpec g;
  g.total_dimension = n1;
  g.first_stratum_dimension = n1;
  g.stratum_sizes = {n1};
  g.field_terms.assign(static_cast<size_t>(n1), {});
  g.validate();
  return g;
}

GroupSpec make_heisenberg() {
  GroupSpec g;
  g.total_dimension = 3;
  g.first_stratum_dimension = 2;
  g.stratum_sizes = {2, 1};
  g.field_terms = {
      {{2, 1, -0.5}},  // X_1 = d_1 - (x_2/2) d_3
      {{2, 0, +0.5}},  // X_2 = d_2 + (x_1/2) d_3
  };
  g.validate();
  return g;
}

}  // namespace subheat
