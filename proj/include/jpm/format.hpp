// format.hpp — locale-free number formatting for file outputs

#pragma once

#include <string>

namespace jpm {

// 17 significant digits, '.' decimal separator; reproduces any double
// bit-exactly, which the byte-identical-rerun guarantees depend on.
std::string format_double(double value);

} // namespace jpm
