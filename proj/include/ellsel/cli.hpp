#ifndef ELLSEL_CLI_HPP
#define ELLSEL_CLI_HPP

#include <complex>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace ellsel::cli
{

/// Exit codes of the command line tool.
enum Exit : int { ok = 0, check_failed = 1, invalid_input = 2 };

/// Runs one command. args excludes the program name. Results go to out (or
/// to --out PATH), diagnostics to err.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// "re,im" or "re" -> complex. Throws InvalidArgument.
std::complex<double> parse_complex(std::string_view text);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

} // namespace ellsel::cli

#endif
