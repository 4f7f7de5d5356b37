#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace mdisc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitThreshold = 4;

std::string_view version();

/// Runs one command line (arguments without the program name). Tables go to
/// --out or `out`; diagnostics and, without --out, the manifest go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 12 significant digits, period decimal separator, "nan" for NaN.
std::string format_number(double v);
/// Shortest representation that parses back to the same double.
std::string format_exact(double v);
/// "start:stop:step", both ends inclusive.
std::vector<double> parse_grid(std::string_view spec);
/// Optional degree conversion, then snapping of values within 5e-5 rad
/// outside [0, pi/4] onto the nearest end (so 0.7854 means pi/4).
double resolve_theta(double value, bool degrees);

}  // namespace mdisc::cli
