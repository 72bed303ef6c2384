#include "subheat/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace subheat {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// pow with fast paths for the exponents that dominate the stepping loop.
inline double pow_real(double base, double e) {
  if (e == 0.0) return 1.0;
  if (e == 1.0) return base;
  if (e == 2.0) return base * base;
  if (e == 0.5) return std::sqrt(base);
  if (e == 1.5) return base * std::sqrt(base);
  if (e == 3.0) return base * base * base;
  return std::pow(base, e);
}

// sign(u)*|u|^q without the singular |u|^{q-1} intermediate.
inline double signed_power(double u, double q) {
  if (u == 0.0) return 0.0;
  return std::copysign(pow_real(std::abs(u), q), u);
}

void require_exponents(const std::vector<double>& list, double coeff, double lower_pos,
                       double lower_neg, const char* what) {
  if (coeff != 0.0 && list.empty())
    throw std::invalid_argument(std::string(what) + " term has a coefficient but no exponents");
  const double lower = coeff > 0.0 ? lower_pos : lower_neg;
  for (double e : list) {
    if (!std::isfinite(e) || !(e > 0.0))
      throw std::invalid_argument(std::string(what) + " exponents must be positive");
    if (coeff != 0.0 && e < lower)
      throw std::invalid_argument(std::string(what) +
                                  " exponent below the admissible range for this sign");
  }
}

Field flux_divergence(const GroupSpec& group, const std::vector<Field>& grad,
                      double p, double eps_reg) {
  if (p == 2.0) return horizontal_divergence(group, grad);
  const Grid& g = grad.front().grid();
  const double expo = 0.5 * (p - 2.0);
  Field weight(g);
  for (std::size_t i = 0; i < weight.size(); ++i) {
    double mag2 = 0.0;
    for (const auto& c : grad) mag2 += c[i] * c[i];
    const double base = mag2 + eps_reg;
    // For p < 2 an exactly vanishing gradient would make the coefficient
    // blow up; the flux itself tends to zero there.
    weight[i] = (base == 0.0 && p < 2.0) ? 0.0 : pow_real(base, expo);
  }
  std::vector<Field> flux = grad;
  for (auto& c : flux) {
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= weight[i];
  }
  return horizontal_divergence(group, flux);
}

}  // namespace

void ProblemSpec::validate() const {
  group.validate();
  if (domain.dim() != group.total_dimension)
    throw std::invalid_argument("domain dimension does not match group");
  if (!(p > 1.0)) throw std::invalid_argument("diffusion exponent p must exceed 1");
  if (!u0.same_grid(Field(domain)))
    throw std::invalid_argument("initial data lives on a different grid");
  require_exponents(q_list, alpha, 1.0, 0.0, "alpha");
  // beta multiplies |grad u|^{r}: r > 1 when beta > 0, r > 0 otherwise.
  if (beta != 0.0 && r_list.empty())
    throw std::invalid_argument("beta term has a coefficient but no exponents");
  for (double r : r_list) {
    if (!std::isfinite(r) || !(r > 0.0))
      throw std::invalid_argument("beta exponents must be positive");
    if (beta > 0.0 && !(r > 1.0))
      throw std::invalid_argument("beta > 0 requires gradient exponents above 1");
  }
  require_exponents(s_list, gamma, 1.0, 0.0, "gamma");
  for_each_node(domain, [&](std::size_t flat, std::span<const int> idx,
                            std::span<const double>) {
    if (u0[flat] < 0.0)
      throw std::invalid_argument("initial data must be nonnegative");
    if (domain.index_on_boundary(idx) && u0[flat] != 0.0)
      throw std::invalid_argument("initial data must vanish on the boundary");
  });
}

void SolverConfig::validate() const {
  if (!(flux_regularization >= 0.0))
    throw std::invalid_argument("flux regularization must be nonnegative");
  if (!(cfl_safety > 0.0) || !(cfl_safety <= 1.0))
    throw std::invalid_argument("cfl safety factor must lie in (0, 1]");
  if (!(blowup_threshold > 0.0)) throw std::invalid_argument("blow-up threshold must be positive");
  if (!(min_dt > 0.0)) throw std::invalid_argument("min_dt must be positive");
  if (!(t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  if (trace_stride < 1) throw std::invalid_argument("trace stride must be >= 1");
  if (snapshot_stride < 0) throw std::invalid_argument("snapshot stride must be >= 0");
  if (!std::isnan(kappa) && !(kappa > 0.0))
    throw std::invalid_argument("energy exponent kappa must be positive when set");
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Completed: return "completed";
    case Outcome::BlowUp: return "blow_up";
    case Outcome::Unstable: return "unstable";
  }
  return "unknown";
}

Field p_sublaplacian(const GroupSpec& group, const Field& u, double p, double eps_reg) {
  if (!(p > 1.0)) throw std::invalid_argument("diffusion exponent p must exceed 1");
  if (!(eps_reg >= 0.0)) throw std::invalid_argument("flux regularization must be nonnegative");
  auto grad = horizontal_gradient(group, u);
  return flux_divergence(group, grad, p, eps_reg);
}

Field reaction_rhs(const ProblemSpec& problem, const Field& u,
                   const std::vector<Field>& grad_h) {
  if (grad_h.size() != static_cast<size_t>(problem.group.first_stratum_dimension))
    throw std::invalid_argument("gradient component count mismatch");
  for (const auto& c : grad_h) {
    if (!c.same_grid(u)) throw std::invalid_argument("gradient grid mismatch");
  }
  const bool need_mag = problem.beta != 0.0;
  Field out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double uu = u[i];
    if (!std::isfinite(uu)) throw std::invalid_argument("non-finite state passed to reaction");
    double acc = 0.0;
    if (problem.alpha != 0.0) {
      double a = 0.0;
      for (double q : problem.q_list) a += signed_power(uu, q);
      acc += problem.alpha * a;
    }
    if (need_mag) {
      double mag2 = 0.0;
      for (const auto& c : grad_h) mag2 += c[i] * c[i];
      const double mag = std::sqrt(mag2);
      double b = 0.0;
      for (double r : problem.r_list) b += pow_real(mag, r);
      acc += problem.beta * b;
    }
    if (problem.gamma != 0.0) {
      double c = 0.0;
      for (double s : problem.s_list) c += signed_power(uu, s);
      acc += problem.gamma * c;
    }
    out[i] = acc;
  }
  return out;
}

double cfl_dt(const ProblemSpec& problem, const Field& u, const SolverConfig& config) {
  const double h = problem.domain.spacing();
  const double n1 = problem.group.first_stratum_dimension;
  const double p = problem.p;

  auto grad = horizontal_gradient(problem.group, u);
  double mag2_min = std::numeric_limits<double>::infinity();
  double mag2_max = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    double mag2 = 0.0;
    for (const auto& c : grad) mag2 += c[i] * c[i];
    mag2_min = std::min(mag2_min, mag2);
    mag2_max = std::max(mag2_max, mag2);
  }
  const double eps = config.flux_regularization;
  // Degenerate (p > 2) diffusion peaks at the largest gradient, singular
  // (p < 2) diffusion at the smallest.
  const double mag2_worst = p >= 2.0 ? mag2_max : mag2_min;
  double diff = (mag2_worst + eps == 0.0 && p < 2.0)
                    ? 0.0
                    : pow_real(mag2_worst + eps, 0.5 * (p - 2.0));
  diff *= std::max(1.0, p - 1.0);

  const double gmax = std::sqrt(mag2_max);
  double grad_lip = 0.0;
  if (problem.beta != 0.0) {
    for (double r : problem.r_list) {
      if (gmax == 0.0 && r < 1.0) continue;
      grad_lip += std::abs(problem.beta) * r * pow_real(gmax, r - 1.0);
    }
  }
  const double umax = u.sup_norm();
  double zeroth_lip = 0.0;
  if (problem.alpha != 0.0) {
    for (double q : problem.q_list) {
      if (umax == 0.0 && q < 1.0) continue;
      zeroth_lip += std::abs(problem.alpha) * q * pow_real(umax, q - 1.0);
    }
  }
  if (problem.gamma != 0.0) {
    for (double s : problem.s_list) {
      if (umax == 0.0 && s < 1.0) continue;
      zeroth_lip += std::abs(problem.gamma) * s * pow_real(umax, s - 1.0);
    }
  }

  const double denom = 2.0 * n1 * diff + h * grad_lip + h * h * zeroth_lip;
  if (denom <= 0.0) return config.cfl_safety * config.t_end;  // nothing moves
  const double dt = config.cfl_safety * h * h / denom;
  return std::max(dt, config.min_dt);
}

Field step(const ProblemSpec& problem, const Field& u, double dt,
           const SolverConfig& config) {
  if (!(dt >= 0.0)) throw std::invalid_argument("negative step size");
  auto grad = horizontal_gradient(problem.group, u);
  Field diffusion = flux_divergence(problem.group, grad, problem.p,
                                    config.flux_regularization);
  Field reaction = reaction_rhs(problem, u, grad);
  Field next(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) {
    next[i] = u[i] + dt * (diffusion[i] + reaction[i]);
  }
  next.enforce_dirichlet();
  return next;
}

namespace {

double trace_energy(const Field& u, double kappa) {
  if (std::isnan(kappa)) return kNaN;
  Field clamped = u;
  for (std::size_t i = 0; i < clamped.size(); ++i) {
    if (clamped[i] < 0.0) clamped[i] = 0.0;
  }
  return energy_y(clamped, kappa);
}

}  // namespace

SolveTrace solve(const ProblemSpec& problem, const SolverConfig& config) {
  problem.validate();
  config.validate();

  Field u = problem.u0;
  u.enforce_dirichlet();
  double t = 0.0;
  long steps = 0;
  double last_dt = 0.0;

  SolveTrace trace;
  auto record = [&](double sup) {
    if (!trace.times.empty() && trace.times.back() == t) return;
    trace.times.push_back(t);
    trace.sup_norms.push_back(sup);
    trace.energies.push_back(trace_energy(u, config.kappa));
    trace.dts.push_back(last_dt);
  };
  auto snapshot = [&]() {
    if (config.snapshot_stride <= 0) return;
    if (!trace.snapshots.empty() && trace.snapshots.back().t == t) return;
    trace.snapshots.push_back({t, u});
  };

  double sup = u.sup_norm();
  double prev_sup = sup;
  record(sup);
  snapshot();

  while (true) {
    sup = u.sup_norm();
    if (!std::isfinite(sup)) {
      trace.outcome = Outcome::Unstable;
      trace.note = "non-finite state";
      break;
    }
    if (sup >= config.blowup_threshold) {
      trace.outcome = Outcome::BlowUp;
      trace.blowup_time = t;
      trace.note = "sup norm crossed the blow-up threshold";
      break;
    }
    if (config.t_end - t <= 1e-14 * config.t_end) {
      trace.outcome = Outcome::Completed;
      break;
    }
    double dt = cfl_dt(problem, u, config);
    if (dt <= config.min_dt) {
      if (sup > prev_sup) {
        trace.outcome = Outcome::BlowUp;
        trace.blowup_time = t;
        trace.note = "step size underflow with growing sup norm";
      } else {
        trace.outcome = Outcome::Unstable;
        trace.note = "step size underflow";
      }
      break;
    }
    dt = std::min(dt, config.t_end - t);
    u = step(problem, u, dt, config);
    prev_sup = sup;
    t += dt;
    last_dt = dt;
    trace.max_dt = std::max(trace.max_dt, dt);
    ++steps;
    if (steps % config.trace_stride == 0) record(u.sup_norm());
    if (config.snapshot_stride > 0 && steps % config.snapshot_stride == 0) snapshot();
  }

  trace.total_steps = steps;
  record(u.sup_norm());
  snapshot();
  return trace;
}

double energy_y(const Field& u, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("energy exponent must be positive");
  const Grid& g = u.grid();
  double cell = 1.0;
  for (int a = 0; a < g.dim(); ++a) cell *= g.spacing();
  long double acc = 0.0L;
  for_each_node(g, [&](std::size_t flat, std::span<const int> idx,
                       std::span<const double>) {
    const double v = u[flat];
    if (v < 0.0) throw std::invalid_argument("energy of a field with negative values");
    double w = 1.0;
    for (size_t a = 0; a < idx.size(); ++a) {
      if (idx[a] == 0 || idx[a] == g.extent(static_cast<int>(a)) - 1) w *= 0.5;
    }
    acc += static_cast<long double>(w * std::pow(v, kappa + 1.0));
  });
  return static_cast<double>(acc) * cell / (kappa + 1.0);
}

Field sine_bump(const Grid& grid, double height) {
  if (!(height >= 0.0)) throw std::invalid_argument("bump height must be nonnegative");
  const double pi = 3.14159265358979323846;
  Field out = Field::sample(grid, [&](std::span<const double> x) {
    double v = height;
    for (int a = 0; a < grid.dim(); ++a) {
      const double len = grid.upper(a) - grid.lower(a);
      v *= std::sin(pi * (x[static_cast<size_t>(a)] - grid.lower(a)) / len);
    }
    return v;
  });
  out.enforce_dirichlet();
  return out;
}

}  // namespace subheat
