// commands.hpp -- the wsnfd command-line front end, callable in-process.
//
//   wsnfd errors    --scenario F         node error table per p_e
//   wsnfd bayes     --scenario F         Bayes weights and threshold per (p_e, l)
//   wsnfd mp        --scenario F         MP test per size
//   wsnfd simulate  --scenario F         Monte Carlo report next to exact values
//   wsnfd dist      --scenario F         H0 or H1 score distribution atoms
//   wsnfd gen-logs  --scenario F         simulated calibration logs (CSV)
//   wsnfd estimate  --logs F             parameter estimates from logs
//
// Common flags: --format {text,csv}, --out PATH. Diagnostics go to `err`.
#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace wsnfd {

/// `args[0]` is the program name, as in argv. Returns the process exit code:
/// 0 on success, 1 on domain or I/O errors, CLI11's code on usage errors.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace wsnfd
