#pragma once

#include <string>
#include <vector>

#include "gps/common.hpp"
#include "gps/solvers.hpp"

namespace gps::cli {

/// "a:step:b" -> inclusive arithmetic sequence, snapped to a 1e-12 grid so
/// float drift cannot change the cell count. Empty ranges are an error.
std::vector<double> parse_ratio_range(const std::string& text);

/// Comma-separated doubles; "inf" is accepted (noiseless sentinel).
std::vector<double> parse_double_list(const std::string& text);

std::vector<int> parse_int_list(const std::string& text);

std::vector<solvers::Algorithm> parse_algorithms(const std::string& text);

std::string join_doubles(const std::vector<double>& v);

}  // namespace gps::cli
