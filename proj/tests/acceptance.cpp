// Acceptance gate: every release-blocking property with its tolerance and
// runtime budget pinned in one place. Each criterion prints exactly one
// PASS/FAIL line; the exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "subheat/harness.hpp"

using namespace subheat;

namespace {

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

struct Criterion {
  int id;
  const char* label;
  double limit_seconds;
  std::function<bool(std::string&)> body;
};

bool inequality_sweep(std::string& detail) {
  const LemmaSweepReport rep = lemma_sweep(10000, 0);
  detail = fmt("min margin %.3g (allow -1e-12), equality rel err %.3g (allow 1e-12)",
               rep.min_margin, rep.equality_max_rel_error);
  return rep.min_margin >= -1e-12 && rep.equality_max_rel_error <= 1e-12;
}

bool radial_identities(std::string& detail) {
  const std::vector<GroupSpec> groups = {make_euclidean(2), make_heisenberg()};
  bool ok = true;
  double worst_order = std::numeric_limits<double>::infinity();
  for (const GroupSpec& group : groups) {
    for (double b : {1.0, 2.0, 3.0, 2.5}) {
      for (const ConvergenceReport& rep :
           {gradient_identity_convergence(group, b, {16, 32, 64}, 1.9),
            divergence_identity_convergence(group, b, {16, 32, 64}, 1.9)}) {
        ok = ok && rep.passed;
        if (!rep.exact) worst_order = std::min(worst_order, rep.fitted_order);
      }
    }
  }
  detail = fmt("16 sweeps, worst fitted order %.3f (need 1.9)", worst_order);
  return ok;
}

bool operator_oracle(std::string& detail) {
  double worst = 0.0;
  for (const auto& [p, k2] : std::vector<std::pair<double, double>>{
           {1.5, 2.0}, {2.0, 3.0}, {3.0, 3.0}}) {
    worst = std::max(worst, operator_oracle_rel_error(p, k2, 1.0 / 64, 1e-8));
  }
  detail = fmt("worst rel err %.3g (allow 0.02)", worst);
  return worst <= 0.02;
}

bool barrier_certificates(std::string& detail) {
  const Grid box({-0.5, -0.5}, {33, 33}, 0.03125);
  const BarrierPlacement pl = default_placement(box, 2);
  const auto r_axis = half_open_samples(pl.eps, pl.r_prime + 1.0, 256);

  const BarrierV1 b1 =
      recipe_v1(2.0, 2.0, 1.5, 2, pl.r_prime, pl.eps, 1.0, pl.x0_prime);
  const SignCertificate c1 = certify_sign(
      "v1",
      [&](std::span<const double> pt) {
        return residual_mp_v1(b1, 2.0, 2.0, 1.5, pt[0]);
      },
      {r_axis}, SignExpectation::NonNegative);

  const BarrierV2 b2 =
      recipe_v2(2.0, 1.0, 2.0, 2, pl.r_prime, pl.eps, 1.0, pl.x0_prime);
  const SignCertificate c2 = certify_sign(
      "v2",
      [&](std::span<const double> pt) {
        return residual_np_v2(b2, 2.0, 1.0, 2.0, 2, pt[0]);
      },
      {r_axis}, SignExpectation::NonNegative);

  const BarrierV4 b4 =
      recipe_v4(2.0, {1.0}, {2.0}, 2, pl.r_prime, pl.eps, 1.0, pl.x0_prime);
  const SignCertificate c4 = certify_sign(
      "v4",
      [&](std::span<const double> pt) { return residual_kp_v4(b4, 2.0, pt[0]); },
      {r_axis}, SignExpectation::NonNegative);

  const BlowupProfile prof = blowup_profile(2.0, 3.0, 1.5, 2);
  const SignCertificate cp = certify_sign(
      "profile",
      [&](std::span<const double> pt) {
        return residual_np_profile(prof, pt[0], pt[1], 2);
      },
      {half_open_samples(prof.t0, prof.time_horizon(), 64),
       open_samples(0.0, prof.r1, 64)},
      SignExpectation::NonPositive);

  detail = fmt("mins %.3g / %.3g / %.3g, profile max %.3g (zero tolerance)",
               c1.min_value, c2.min_value, c4.min_value, cp.max_value);
  return c1.passed && c2.passed && c4.passed && cp.passed;
}

bool bounded_gradient_drive(std::string& detail) {
  const ScenarioResult res = run_boundedness(default_config("boundedness-3.2i"));
  const SolveTrace& tr = res.trace;
  std::size_t at_one = 0;
  while (at_one < tr.times.size() && tr.times[at_one] < 1.0 - 1e-12) ++at_one;
  const bool decayed = at_one < tr.times.size() &&
                       tr.sup_norms.back() < tr.sup_norms[at_one];
  detail = fmt("max sup %.4g vs bound %.4g; sup %.3g at t=1 -> %.3g at end",
               res.max_sup_norm, res.bound,
               at_one < tr.times.size() ? tr.sup_norms[at_one] : -1.0,
               tr.sup_norms.back());
  return res.passed && res.outcome == Outcome::Completed && res.bound_held &&
         decayed;
}

bool bounded_state_sink(std::string& detail) {
  const ScenarioResult res = run_boundedness(default_config("boundedness-3.5"));
  detail = fmt("max sup %.4g vs bound %.4g over %zu samples", res.max_sup_norm,
               res.bound, res.trace.times.size());
  return res.outcome == Outcome::Completed && res.bound_held;
}

bool profile_blowup(const char* scenario, std::string& detail) {
  const ScenarioResult res = run_blowup(default_config(scenario));
  detail = fmt("blow-up at t=%.4g (window %.4g +20%%); floor excess %.3g vs tol %.3g",
               res.blowup_time, res.blowup_window, res.ordering.max_excess,
               res.ordering.tolerance);
  return res.passed && res.outcome == Outcome::BlowUp &&
         res.blowup_time <= 1.2 * res.blowup_window && res.has_ordering &&
         res.ordering.passed;
}

bool energy_growth(std::string& detail) {
  const ScenarioResult res = run_energy_blowup(default_config("blowup-3.4"));
  detail = fmt("first blowing scale %d, slope %.3f (need %.2f)", res.ladder_rung,
               res.fitted_slope, res.required_slope);
  return res.passed && res.outcome == Outcome::BlowUp &&
         std::fabs(res.required_slope - 1.25) < 1e-12 &&
         res.fitted_slope >= 1.25;
}

bool evolved_ordering(std::string& detail) {
  ExperimentConfig cfg = default_config("custom");
  cfg.t_end = 0.5;
  cfg.trace_stride = 100;
  cfg.snapshot_stride = 100;
  const Grid grid = cfg.make_grid();
  ProblemSpec full = cfg.make_problem(sine_bump(grid, 1.0));
  ProblemSpec half = cfg.make_problem(sine_bump(grid, 0.5));
  const SolverConfig solver = cfg.make_solver();
  const SolveTrace tr_full = solve(full, solver);
  const SolveTrace tr_half = solve(half, solver);
  if (tr_full.outcome != Outcome::Completed ||
      tr_half.outcome != Outcome::Completed) {
    detail = "one of the paired runs did not complete";
    return false;
  }
  const double tol = ordering_tolerance(
      grid.spacing(), std::max(tr_full.max_dt, tr_half.max_dt));
  const OrderingReport rep =
      check_ordering(tr_half.snapshots, tr_full.snapshots, tol, &full);
  detail = fmt("max excess %.3g vs tol %.3g over %ld samples", rep.max_excess,
               rep.tolerance, rep.compared_samples);
  return rep.passed && rep.hypotheses_hold;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "monotone inequality sweep, 10^4 triples", 1.0, inequality_sweep},
      {2, "radial identity convergence order >= 1.9, both backends", 10.0,
       radial_identities},
      {3, "diffusion operator vs closed form, rel err <= 2%", 10.0,
       operator_oracle},
      {4, "barrier and profile residual sign certificates", 1.0,
       barrier_certificates},
      {5, "gradient-driven run stays under its ceiling and decays", 60.0,
       bounded_gradient_drive},
      {6, "state-sink run stays under its ceiling", 60.0, bounded_state_sink},
      {7, "gradient-sink profile run blows up inside its window", 120.0,
       [](std::string& d) { return profile_blowup("blowup-3.3", d); }},
      {8, "state-sink profile run blows up inside its window", 120.0,
       [](std::string& d) { return profile_blowup("blowup-3.6", d); }},
      {9, "energy growth slope >= 1.25 on the first blowing scale", 120.0,
       energy_growth},
      {10, "halved initial data stays below the full evolution", 60.0,
       evolved_ordering},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    std::string detail;
    bool ok = false;
    const auto start = std::chrono::steady_clock::now();
    try {
      ok = c.body(detail);
    } catch (const std::exception& e) {
      detail = fmt("exception: %s", e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (secs > c.limit_seconds) {
      ok = false;
      detail += fmt(" [exceeded %.0fs budget]", c.limit_seconds);
    }
    std::printf("[%s] %2d. %-58s (%6.2fs)  %s\n", ok ? "PASS" : "FAIL", c.id,
                c.label, secs, detail.c_str());
    if (!ok) ++failures;
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}
