#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qspec/linalg.hpp"

namespace qspec {

/// Runs one CLI invocation. argv[0] is the program name. Reports go to `out`
/// (or to --out PATH); diagnostics go to `err`.
/// Exit codes: 0 success, 1 computation error, 2 usage error.
int dispatch(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

/// Parses sums of weighted Pauli strings such as "0.5*IY+II" or "X-2*Z".
ComplexMatrix parse_pauli_sum(std::string_view expr);

/// Parses "a,b,c" into doubles; throws Error(InvalidArgument) on bad input.
std::vector<double> parse_number_list(std::string_view text);

}  // namespace qspec
