#pragma once

#include <string>
#include <vector>

namespace subheat {

struct VerifyOptions {
  long samples = 10000;  // inequality sweep draws; also caps certificate axes
  unsigned long long seed = 0;
  // Multiplies the exponential barrier constant before certification; values
  // below 1 break the certificate on purpose (fault injection for the
  // verification pipeline itself).
  double scale_k1 = 1.0;
};

// Parses the config, runs the scenario, and writes trace.csv, slices.csv and
// summary.json under <out_dir>/<scenario>/. The SUBHEAT_OUT_DIR environment
// variable overrides the configured output directory.
// Returns 0 on pass, 1 on assertion failure, 2 on parse errors, 3 on
// invariant violations.
int run_command(const std::string& config_path);

struct VerifyRow {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Runs every closed-form check that needs no time stepping: the monotone
// inequality sweep, radial identity convergence on both backends, the
// operator oracle, barrier recipe certificates, and the self-similar profile
// certificate. One row per check. Note the inequality sweep row fails by
// construction whenever the sampled exponent range dips below 2; see the
// sweep's own documentation.
std::vector<VerifyRow> verify_rows(const VerifyOptions& opts = {});

// Prints the verify_rows table, one pass/fail line per check, and returns 0
// iff all rows pass.
int verify_command(const VerifyOptions& opts = {});

}  // namespace subheat
