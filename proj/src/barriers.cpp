#include "subheat/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subheat {

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void require_placement(double r_prime, double eps, double u0_supnorm) {
  require(std::isfinite(r_prime) && r_prime >= 0.0,
          "r_prime must be finite and nonnegative");
  require(eps > 0.0 && eps < 1.0, "eps must lie in (0, 1)");
  require(std::isfinite(u0_supnorm) && u0_supnorm >= 0.0,
          "initial sup norm must be finite and nonnegative");
}

// Distance from the first-stratum part of x to the barrier base point.
double first_stratum_distance(std::span<const double> x,
                              std::span<const double> x0_prime) {
  double r2 = 0.0;
  for (std::size_t i = 0; i < x0_prime.size(); ++i) {
    const double d = x[i] - x0_prime[i];
    r2 += d * d;
  }
  return std::sqrt(r2);
}

template <typename Barrier>
Field sample_barrier(const Barrier& b, const Grid& grid) {
  require(!b.x0_prime.empty(), "barrier has no base point; set x0_prime");
  require(static_cast<int>(b.x0_prime.size()) == b.n1,
          "base point dimension must equal the first stratum dimension");
  require(grid.dim() >= b.n1, "grid has fewer axes than the first stratum");
  return Field::sample(grid, [&](std::span<const double> x) {
    return b.value(first_stratum_distance(x, b.x0_prime));
  });
}

// Shared start-time test for the self-similar profile. Both bounds are sums
// of a negative constant and terms that vanish as tau -> 0, so once they hold
// at some rung they hold at every later one.
bool start_time_certified(const BlowupProfile& f, int m) {
  const double tau = std::ldexp(1.0, -m);
  const double e1 = 1.0 - 2.0 * f.k2 - (f.p - 2.0) * (f.k1 + f.k2);
  const double e2 = f.k1 + 1.0 - f.r * (f.k1 + f.k2);
  const double tail = (f.n1 / f.a) * std::pow(tau, e1);
  const double inner = f.delta * f.k1 * (1.0 + f.a / f.sigma) - 1.0 + tail +
                       std::pow(tau, e2);
  const double outer = f.delta * (f.k1 - f.k2 * f.a) + tail +
                       std::pow(f.r1 / f.a, f.r * (f.sigma - 1.0)) *
                           std::pow(tau, e2);
  return inner <= 0.0 && outer <= 0.0;
}

}  // namespace

BarrierPlacement default_placement(const Grid& domain, int n1) {
  require(n1 >= 1, "first stratum dimension must be positive");
  require(n1 <= domain.dim(), "first stratum dimension exceeds the grid dimension");
  BarrierPlacement pl;
  pl.x0_prime.resize(static_cast<size_t>(n1));
  pl.x0_prime[0] = domain.lower(0) - 0.25;
  for (int i = 1; i < n1; ++i)
    pl.x0_prime[static_cast<size_t>(i)] = 0.5 * (domain.lower(i) + domain.upper(i));

  // The base point differs from the box only along axis 0, so the gap to the
  // box is the axis-0 offset.
  const double gap = domain.lower(0) - pl.x0_prime[0];
  pl.eps = std::min(0.5, 0.5 * gap);

  double r2_max = 0.0;
  for (int corner = 0; corner < (1 << n1); ++corner) {
    double r2 = 0.0;
    for (int i = 0; i < n1; ++i) {
      const double c = ((corner >> i) & 1) ? domain.upper(i) : domain.lower(i);
      const double d = c - pl.x0_prime[static_cast<size_t>(i)];
      r2 += d * d;
    }
    r2_max = std::max(r2_max, r2);
  }
  pl.r_prime = std::sqrt(r2_max);

  // Distances from the base point are convex over the box, so the extremes
  // sit on corners (max) and on the near face (min = gap >= 2*eps).
  require(pl.eps > 0.0 && pl.eps < 1.0, "placement produced eps outside (0, 1)");
  require(pl.r_prime < pl.r_prime + 1.0, "placement radius overflowed");
  return pl;
}

double BarrierV1::value(double R) const { return k * std::exp(sigma * R); }
double BarrierV1::bound() const { return k * std::exp(sigma * (r_prime + 1.0)); }

double BarrierV2::value(double R) const { return k / sigma * std::pow(R, sigma); }
double BarrierV2::bound() const {
  return k / sigma * std::pow(r_prime + 1.0, sigma);
}

double BarrierV3::value(double R) const { return k * std::pow(R, sigma); }
double BarrierV3::bound() const { return k * std::pow(r_prime + 1.0, sigma); }

double BarrierV4::value(double R) const { return k / sigma * std::pow(R, sigma); }
double BarrierV4::bound() const {
  return k / sigma * std::pow(r_prime + 1.0, sigma);
}

BarrierV1 recipe_v1(double p, double q, double r, int n1, double r_prime,
                    double eps, double u0_supnorm, std::vector<double> x0_prime) {
  require(p > 1.0, "p must exceed 1");
  require(n1 >= 1, "first stratum dimension must be positive");
  require(q > r, "exponential barrier needs q > r");
  require(q + 1.0 > p, "exponential barrier needs q > p - 1");
  require(r + 1.0 >= p, "exponential barrier needs r >= p - 1");
  require_placement(r_prime, eps, u0_supnorm);

  BarrierV1 b;
  b.n1 = n1;
  b.r_prime = r_prime;
  b.eps = eps;
  b.x0_prime = std::move(x0_prime);
  if (r + 1.0 == p) {
    b.sigma = 1.0;
    const double state = std::pow(2.0, 1.0 / (q - r));
    const double diffusion =
        std::pow(2.0 * (p - 1.0 + (n1 - 1.0) / eps), 1.0 / (q + 1.0 - p));
    b.k = std::max({state, diffusion, u0_supnorm});
  } else {
    b.sigma = 1.0 / ((r - p + 1.0) * (r_prime + 1.0));
    const double state =
        std::pow(2.0 * std::exp(1.0) * std::pow(b.sigma, r), 1.0 / (q - r));
    const double diffusion =
        std::pow(2.0 * ((p - 1.0) * std::pow(b.sigma, p) +
                        (n1 - 1.0) * std::pow(b.sigma, p - 1.0) / eps),
                 1.0 / (q + 1.0 - p));
    b.k = std::max({state, diffusion, u0_supnorm});
  }
  return b;
}

BarrierV2 recipe_v2(double p, double q, double r, int n1, double r_prime,
                    double eps, double u0_supnorm, std::vector<double> x0_prime) {
  require(p > 1.0, "p must exceed 1");
  require(n1 >= 1, "first stratum dimension must be positive");
  require(q > 0.0, "q must be positive");
  if (r == q) throw std::invalid_argument("r == q: use recipe_v3");
  require(r > q, "power barrier needs r > q");
  require(r + 1.0 > p, "power barrier needs r > p - 1");
  require_placement(r_prime, eps, u0_supnorm);

  BarrierV2 b;
  b.n1 = n1;
  b.r_prime = r_prime;
  b.eps = eps;
  b.x0_prime = std::move(x0_prime);
  b.sigma = p / (p - 1.0);

  const double data = b.sigma * u0_supnorm / std::pow(eps, b.sigma);
  const double diffusion =
      std::pow(2.0 * n1 / std::pow(eps, r / (p - 1.0)), 1.0 / (r - p + 1.0));
  // The state term is dominated at whichever end of [eps, r_prime + 1) makes
  // R^{(qp - r)/(p-1)} largest; covering both ends covers both signs of the
  // exponent.
  const double state_base = std::pow(2.0 / std::pow(b.sigma, q), 1.0 / (r - q));
  const double state_exp = (q * p - r) / ((p - 1.0) * (r - q));
  const double state_far = state_base * std::pow(r_prime + 1.0, state_exp);
  const double state_near = state_base * std::pow(eps, state_exp);
  b.k = std::max({data, diffusion, state_far, state_near});
  return b;
}

BarrierV3 recipe_v3(double p, double r, int n1, double r_prime, double eps,
                    double u0_supnorm, std::vector<double> x0_prime) {
  require(p > 1.0, "p must exceed 1");
  require(n1 >= 1, "first stratum dimension must be positive");
  require(r > 0.0, "r must be positive");
  require(r + 1.0 > p, "balanced barrier needs r > p - 1");
  require_placement(r_prime, eps, u0_supnorm);

  BarrierV3 b;
  b.n1 = n1;
  b.r_prime = r_prime;
  b.eps = eps;
  b.x0_prime = std::move(x0_prime);
  b.sigma = std::max(1.0, std::pow(2.0, 1.0 / r) * (r_prime + 1.0));
  const double data = u0_supnorm / std::pow(eps, b.sigma);
  const double diffusion =
      std::pow(2.0 * ((p - 1.0) * (b.sigma - 1.0) + n1 - 1.0) /
                   std::pow(eps, (r - p + 1.0) * (b.sigma - 1.0) + 1.0),
               1.0 / (r - p + 1.0));
  b.k = std::max(data, diffusion);
  return b;
}

BarrierV4 recipe_v4(double p, const std::vector<double>& q_list,
                    const std::vector<double>& s_list, int n1, double r_prime,
                    double eps, double u0_supnorm, std::vector<double> x0_prime) {
  require(p > 1.0, "p must exceed 1");
  require(n1 >= 1, "first stratum dimension must be positive");
  require(!q_list.empty(), "q_list must not be empty");
  require(!s_list.empty(), "s_list must not be empty");
  for (double q : q_list) require(q >= 1.0, "every q must be at least 1");
  for (double s : s_list) require(s > 0.0, "every s must be positive");
  const double s_min = *std::min_element(s_list.begin(), s_list.end());
  require(s_min + 1.0 > p, "power barrier needs min s > p - 1");
  require_placement(r_prime, eps, u0_supnorm);

  BarrierV4 b;
  b.n1 = n1;
  b.q_list = q_list;
  b.s_list = s_list;
  b.r_prime = r_prime;
  b.eps = eps;
  b.x0_prime = std::move(x0_prime);
  b.sigma = p / (p - 1.0);

  const double data = b.sigma * u0_supnorm / std::pow(eps, b.sigma);
  long double near_sum = 0.0L;
  for (double s : s_list)
    near_sum += std::pow(eps, s * p / (p - 1.0)) / std::pow(b.sigma, s);
  const double diffusion =
      std::pow(2.0 * n1, 1.0 / (s_min - p + 1.0)) *
      std::pow(static_cast<double>(near_sum), -1.0 / (s_min - p + 1.0));
  const double state = 2.0 * b.sigma * std::pow(eps, -p / (p - 1.0));
  b.k = std::max({data, diffusion, state});
  return b;
}

double residual_mp_v1(const BarrierV1& b, double p, double q, double r, double R) {
  require(R >= b.eps && R < b.r_prime + 1.0,
          "R outside the certified annulus [eps, r_prime + 1)");
  const double drift = std::exp((p - 1.0) * b.sigma * R) * std::pow(b.k, p - 1.0);
  const double radial = (p - 1.0) * std::pow(b.sigma, p) * drift;
  const double angular = (b.n1 - 1.0) / R * std::pow(b.sigma, p - 1.0) * drift;
  const double state = std::pow(b.k, q) * std::exp(q * b.sigma * R);
  const double gradient =
      std::pow(b.k, r) * std::pow(b.sigma, r) * std::exp(r * b.sigma * R);
  return -radial - angular + state - gradient;
}

double residual_np_v2(const BarrierV2& b, double p, double q, double r, int n1,
                      double R) {
  require(R >= b.eps && R < b.r_prime + 1.0,
          "R outside the certified annulus [eps, r_prime + 1)");
  const double diffusion = n1 * std::pow(b.k, p - 1.0);
  const double gradient = std::pow(b.k, r) * std::pow(R, r / (p - 1.0));
  const double state =
      std::pow(b.k / b.sigma, q) * std::pow(R, q * p / (p - 1.0));
  return -diffusion + gradient - state;
}

double residual_kp_v4(const BarrierV4& b, double p, double R) {
  require(R >= b.eps && R < b.r_prime + 1.0,
          "R outside the certified annulus [eps, r_prime + 1)");
  const double diffusion = b.n1 * std::pow(b.k, p - 1.0);
  double driving = 0.0;
  for (double q : b.q_list)
    driving += std::pow(b.k / b.sigma, q) * std::pow(R, q * p / (p - 1.0));
  double absorbing = 0.0;
  for (double s : b.s_list)
    absorbing += std::pow(b.k / b.sigma, s) * std::pow(R, s * p / (p - 1.0));
  return -diffusion - driving + absorbing;
}

Field barrier_field(const BarrierV1& b, const Grid& grid) {
  return sample_barrier(b, grid);
}
Field barrier_field(const BarrierV2& b, const Grid& grid) {
  return sample_barrier(b, grid);
}
Field barrier_field(const BarrierV3& b, const Grid& grid) {
  return sample_barrier(b, grid);
}
Field barrier_field(const BarrierV4& b, const Grid& grid) {
  return sample_barrier(b, grid);
}

double BlowupProfile::profile(double y) const {
  return 1.0 + a / sigma - std::pow(y, sigma) / (sigma * std::pow(a, sigma - 1.0));
}

double BlowupProfile::profile_slope(double y) const {
  return y == 0.0 ? 0.0 : -std::pow(y / a, sigma - 1.0);
}

double BlowupProfile::value(double t, double rho) const {
  const double tau = 1.0 - delta * t;
  if (!(tau > 0.0))
    throw std::invalid_argument("time at or past the blow-up horizon");
  return std::pow(tau, -k1) * profile(rho * std::pow(tau, -k2));
}

Field BlowupProfile::sample(const Grid& grid, double t) const {
  if (grid.dim() < n1)
    throw std::invalid_argument("grid has fewer axes than the first stratum");
  const double tau = 1.0 - delta * t;
  if (!(tau > 0.0))
    throw std::invalid_argument("time at or past the blow-up horizon");
  const double height = std::pow(tau, -k1);
  const double squeeze = std::pow(tau, -k2);
  return Field::sample(grid, [&](std::span<const double> x) {
    double rho2 = 0.0;
    for (int i = 0; i < n1; ++i) rho2 += x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    const double v = height * profile(std::sqrt(rho2) * squeeze);
    return v > 0.0 ? v : 0.0;
  });
}

BlowupProfile BlowupProfile::at_ladder(int m) const {
  if (m < 1 || m > 60)
    throw std::invalid_argument("ladder index must lie in [1, 60]");
  BlowupProfile out = *this;
  if (!start_time_certified(out, m))
    throw std::invalid_argument("start time not certified at this ladder rung");
  out.ladder_index = m;
  out.t0 = (1.0 - std::ldexp(1.0, -m)) / delta;
  return out;
}

BlowupProfile blowup_profile(double p, double q, double r, int n1) {
  require(p > 1.0, "p must exceed 1");
  require(q > 1.0, "q must exceed 1");
  require(r > 0.0, "r must be positive");
  require(q + 1.0 > p, "profile needs q > p - 1");
  require(q > r, "profile needs q > r");
  require(n1 >= 1, "first stratum dimension must be positive");

  BlowupProfile f;
  f.p = p;
  f.q = q;
  f.r = r;
  f.n1 = n1;
  f.sigma = p / (p - 1.0);
  f.k1 = 1.0 / (q - 1.0);
  const double cap = std::min((q - p + 1.0) / (p * (q - 1.0)),
                              (q - r) / (r * (q - 1.0)));
  f.k2 = 0.5 * cap;
  f.a = 2.0 * f.k1 / f.k2;
  f.delta = 1.0 / (2.0 * f.k1 * (1.0 + f.a / f.sigma));
  f.r1 = std::pow(std::pow(f.a, f.sigma - 1.0) * (f.a + f.sigma), 1.0 / f.sigma);

  for (int m = 1; m <= 40; ++m) {
    if (start_time_certified(f, m)) {
      f.ladder_index = m;
      f.t0 = (1.0 - std::ldexp(1.0, -m)) / f.delta;
      return f;
    }
  }
  throw std::invalid_argument(
      "no start time certified within 40 ladder rungs; exponents sit too "
      "close to a regime boundary");
}

double residual_np_profile(const BlowupProfile& prof, double t, double y, int n1) {
  const double tau = 1.0 - prof.delta * t;
  require(tau > 0.0, "time at or past the blow-up horizon");
  require(y >= 0.0 && y <= prof.r1, "profile coordinate outside [0, R1]");
  const double F = prof.profile(y);
  const double Fp = prof.profile_slope(y);
  const double time_term = prof.delta * (prof.k1 * F + prof.k2 * y * Fp) *
                           std::pow(tau, -(prof.k1 + 1.0));
  const double diffusion =
      (n1 / prof.a) *
      std::pow(tau, -((prof.p - 2.0) * (prof.k1 + prof.k2) + prof.k1 +
                      2.0 * prof.k2));
  const double driving = std::pow(F, prof.q) * std::pow(tau, -prof.q * prof.k1);
  const double gradient = std::pow(std::fabs(Fp), prof.r) *
                          std::pow(tau, -prof.r * (prof.k1 + prof.k2));
  return time_term + diffusion - driving + gradient;
}

double residual_np_profile_state_sink(const BlowupProfile& prof, double s,
                                      double t, double y, int n1) {
  const double tau = 1.0 - prof.delta * t;
  require(tau > 0.0, "time at or past the blow-up horizon");
  require(y >= 0.0 && y <= prof.r1, "profile coordinate outside [0, R1]");
  require(s > 0.0, "s must be positive");
  const double F = prof.profile(y);
  const double Fp = prof.profile_slope(y);
  const double time_term = prof.delta * (prof.k1 * F + prof.k2 * y * Fp) *
                           std::pow(tau, -(prof.k1 + 1.0));
  const double diffusion =
      (n1 / prof.a) *
      std::pow(tau, -((prof.p - 2.0) * (prof.k1 + prof.k2) + prof.k1 +
                      2.0 * prof.k2));
  const double driving = std::pow(F, prof.q) * std::pow(tau, -prof.q * prof.k1);
  const double absorbing = std::pow(F, s) * std::pow(tau, -s * prof.k1);
  return time_term + diffusion - driving + absorbing;
}

SignCertificate certify_sign(const std::string& name,
                             const std::function<double(std::span<const double>)>& residual,
                             const std::vector<std::vector<double>>& axes,
                             SignExpectation expected) {
  require(!axes.empty(), "certificate needs at least one sampling axis");
  SignCertificate cert;
  cert.name = name;
  cert.expected = expected;
  cert.total_samples = 1;
  for (const auto& axis : axes) {
    require(!axis.empty(), "certificate axis has no samples");
    cert.samples_per_axis.push_back(static_cast<int>(axis.size()));
    cert.low_resolution = cert.low_resolution || axis.size() < 8;
    cert.total_samples *= static_cast<long>(axis.size());
  }

  std::vector<std::size_t> idx(axes.size(), 0);
  std::vector<double> point(axes.size());
  std::vector<double> arg_min, arg_max;
  bool first = true;
  while (true) {
    for (std::size_t d = 0; d < axes.size(); ++d) point[d] = axes[d][idx[d]];
    const double v = residual(point);
    if (!std::isfinite(v)) {
      cert.min_value = v;
      cert.max_value = v;
      cert.worst_point = point;
      cert.passed = false;
      return cert;
    }
    if (first || v < cert.min_value) {
      cert.min_value = v;
      arg_min = point;
    }
    if (first || v > cert.max_value) {
      cert.max_value = v;
      arg_max = point;
    }
    first = false;

    std::size_t d = axes.size();
    while (d > 0) {
      --d;
      if (++idx[d] < axes[d].size()) break;
      idx[d] = 0;
      if (d == 0) {
        cert.passed = expected == SignExpectation::NonNegative
                          ? cert.min_value >= 0.0
                          : cert.max_value <= 0.0;
        cert.worst_point =
            expected == SignExpectation::NonNegative ? arg_min : arg_max;
        return cert;
      }
    }
  }
}

std::vector<double> half_open_samples(double lo, double hi, int n) {
  require(n >= 1, "sample count must be positive");
  require(hi > lo, "sample interval must have positive length");
  std::vector<double> out(static_cast<size_t>(n));
  const double step = (hi - lo) / n;
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = lo + step * i;
  return out;
}

std::vector<double> open_samples(double lo, double hi, int n) {
  require(n >= 1, "sample count must be positive");
  require(hi > lo, "sample interval must have positive length");
  std::vector<double> out(static_cast<size_t>(n));
  const double step = (hi - lo) / (n + 1);
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = lo + step * (i + 1);
  return out;
}

}  // namespace subheat
