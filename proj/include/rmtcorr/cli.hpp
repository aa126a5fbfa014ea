#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rmtcorr {

/// Entry point of the `rmtcorr` command line tool. `args` excludes the
/// program name. Returns the process exit status: 0 iff every step
/// succeeded.
///
///   simulate   write a scenario data source (status + factor columns)
///   analyze    status-only MSR curve and signal areas
///   correlate  analyze plus one augmented analysis and verdict per factor
///   laws       Ring Law / M-P densities and radii for given (c, L, d)
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rmtcorr
