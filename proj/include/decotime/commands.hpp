// commands.hpp — The subcommands behind the decotime executable, kept in the
// library so they can be exercised without spawning a process.
//
// CSV layouts (header line first, numbers at 17 significant digits):
//   trajectory  t,rho11,re_rho12,im_rho12,abs_rho12,method
//   sweep       lambda,eta,t_m,upper_bound,status
// JSON output wraps the same rows in an envelope with the normalized config,
// the tool version and the wall-clock duration.

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "decotime/scenario.hpp"

namespace decotime::cli {

std::string_view version() noexcept;

struct CommandOutput {
    std::string text;
    bool any_success{true}; // sweep: at least one cell converged
};

CommandOutput run_trajectory(const ScenarioConfig& c, OutputFormat format);
/// Always JSON: t_m, upper_bound, f, lambda, eta, residual, method, iterations.
CommandOutput run_tmeasure(const ScenarioConfig& c);
CommandOutput run_sweep(const ScenarioConfig& c, OutputFormat format, unsigned jobs);

/// Oracle-equivalence checks; one PASS/FAIL line per check on `out`.
bool run_selftest(std::ostream& out);

} // namespace decotime::cli
