#pragma once

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "subheat/grid.hpp"

namespace subheat {

// Base point and radii shared by the radial super-solution families. The
// barriers depend on x only through R = |x' - x0'|, the first-stratum
// distance to a base point placed outside the domain.
struct BarrierPlacement {
  std::vector<double> x0_prime;  // first-stratum coordinates of the base point
  double r_prime = 0.0;          // max |x'| over the closed domain box
  double eps = 0.0;              // lower bound for R on the domain, in (0,1)
};

// Places x0' on the first horizontal axis a quarter unit outside the box,
// centered along the remaining horizontal axes, with eps = min(1/2, half the
// gap) and r_prime the farthest corner distance. Every node of the box then
// satisfies eps <= R <= r_prime.
BarrierPlacement default_placement(const Grid& domain, int n1);

// Exponential barrier V(x) = K * exp(sigma * R).
struct BarrierV1 {
  double k = 0.0;
  double sigma = 0.0;
  int n1 = 0;
  double r_prime = 0.0;
  double eps = 0.0;
  std::vector<double> x0_prime;

  double value(double R) const;
  double bound() const;  // K * exp(sigma * (r_prime + 1))
};

// Power barrier V(x) = (K/sigma) * R^sigma with sigma = p/(p-1).
struct BarrierV2 {
  double k = 0.0;
  double sigma = 0.0;
  int n1 = 0;
  double r_prime = 0.0;
  double eps = 0.0;
  std::vector<double> x0_prime;

  double value(double R) const;
  double bound() const;  // (K/sigma) * (r_prime + 1)^sigma
};

// Power barrier V(x) = K * R^sigma for the balanced-exponent regime.
struct BarrierV3 {
  double k = 0.0;
  double sigma = 0.0;
  int n1 = 0;
  double r_prime = 0.0;
  double eps = 0.0;
  std::vector<double> x0_prime;

  double value(double R) const;
  double bound() const;  // K * (r_prime + 1)^sigma
};

// Power barrier V(x) = (K/sigma) * R^sigma, sigma = p/(p-1), for problems
// with two families of zeroth-order terms (driving exponents q_i, absorbing
// exponents s_i).
struct BarrierV4 {
  double k = 0.0;
  double sigma = 0.0;
  int n1 = 0;
  std::vector<double> q_list;
  std::vector<double> s_list;
  double r_prime = 0.0;
  double eps = 0.0;
  std::vector<double> x0_prime;

  double value(double R) const;
  double bound() const;
};

// Barrier recipes. Each pins the free constants so the matching residual is
// certifiably signed on eps <= R < r_prime + 1 and the barrier dominates any
// initial data with the given sup norm.
BarrierV1 recipe_v1(double p, double q, double r, int n1, double r_prime,
                    double eps, double u0_supnorm, std::vector<double> x0_prime = {});
BarrierV2 recipe_v2(double p, double q, double r, int n1, double r_prime,
                    double eps, double u0_supnorm, std::vector<double> x0_prime = {});
BarrierV3 recipe_v3(double p, double r, int n1, double r_prime, double eps,
                    double u0_supnorm, std::vector<double> x0_prime = {});
BarrierV4 recipe_v4(double p, const std::vector<double>& q_list,
                    const std::vector<double>& s_list, int n1, double r_prime,
                    double eps, double u0_supnorm, std::vector<double> x0_prime = {});

// Closed-form super-solution residuals as functions of R. Nonnegative over
// [eps, r_prime + 1) certifies the barrier against the matching problem.
double residual_mp_v1(const BarrierV1& b, double p, double q, double r, double R);
double residual_np_v2(const BarrierV2& b, double p, double q, double r, int n1, double R);
double residual_kp_v4(const BarrierV4& b, double p, double R);

// Samples a barrier on a grid (needs x0_prime to be set).
Field barrier_field(const BarrierV1& b, const Grid& grid);
Field barrier_field(const BarrierV2& b, const Grid& grid);
Field barrier_field(const BarrierV3& b, const Grid& grid);
Field barrier_field(const BarrierV4& b, const Grid& grid);

// Self-similar radial sub-solution
//   v(t, x) = (1 - delta*t)^{-k1} * F(|x'| / (1 - delta*t)^{k2})
// with profile F(y) = 1 + A/sigma - y^sigma / (sigma * A^{sigma-1}). The
// profile is positive exactly on y < R1 and v blows up at t = 1/delta.
struct BlowupProfile {
  double p = 0.0, q = 0.0, r = 0.0;
  int n1 = 0;
  double sigma = 0.0;  // p/(p-1)
  double k1 = 0.0;     // 1/(q-1)
  double k2 = 0.0;
  double a = 0.0;      // profile width parameter A
  double delta = 0.0;
  double r1 = 0.0;     // positive root of F
  double t0 = 0.0;     // certified start time
  int ladder_index = 0;

  double profile(double y) const;        // F
  double profile_slope(double y) const;  // F'
  double value(double t, double rho) const;
  double support_radius(double t) const { return r1 * std::pow(1.0 - delta * t, k2); }
  double time_horizon() const { return 1.0 / delta; }
  Field sample(const Grid& grid, double t) const;
  // Re-runs the start-time certification at a later rung of the geometric
  // ladder t = (1/delta)(1 - 2^-m); larger m shrinks the support.
  BlowupProfile at_ladder(int m) const;
};

BlowupProfile blowup_profile(double p, double q, double r, int n1);

// Residual of v against u_t = Lp(u) + u^q - |grad u|^r; nonpositive on
// [t0, 1/delta) x (0, R1) certifies v as a sub-solution.
double residual_np_profile(const BlowupProfile& prof, double t, double y, int n1);

// Same scaling but with a zeroth-order absorbing term u^s instead of the
// gradient one; used for the second blow-up family.
double residual_np_profile_state_sink(const BlowupProfile& prof, double s,
                                      double t, double y, int n1);

enum class SignExpectation { NonNegative, NonPositive };

struct SignCertificate {
  std::string name;
  SignExpectation expected = SignExpectation::NonNegative;
  double min_value = 0.0;
  double max_value = 0.0;
  std::vector<double> worst_point;  // location of the extremum that decides the sign
  std::vector<int> samples_per_axis;
  long total_samples = 0;
  bool low_resolution = false;  // fewer than 8 samples on some axis
  bool passed = false;
};

// Evaluates a residual on the tensor grid spanned by the per-axis sample
// lists and checks the requested sign with zero tolerance.
SignCertificate certify_sign(const std::string& name,
                             const std::function<double(std::span<const double>)>& residual,
                             const std::vector<std::vector<double>>& axes,
                             SignExpectation expected);

// n samples of [lo, hi): lo included, hi excluded.
std::vector<double> half_open_samples(double lo, double hi, int n);
// n samples of (lo, hi): both ends excluded.
std::vector<double> open_samples(double lo, double hi, int n);

}  // namespace subheat
