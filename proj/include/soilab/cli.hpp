#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace soilab::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalFailure = 3 };

/// "3", "-1,1", "0..3", "-2..2,5". Order is preserved; throws InvalidArgument on
/// empty, malformed or descending ranges.
std::vector<int> parse_int_list(const std::string& text);
/// "10,20,40.5"; throws InvalidArgument when empty or malformed.
std::vector<double> parse_double_list(const std::string& text);

/// Runs the `soilab` front end. args[0] is the program name. Data goes to `out` when
/// no --out is given; notes and errors go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace soilab::cli
