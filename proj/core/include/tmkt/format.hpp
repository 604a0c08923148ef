#pragma once

#include <string>

namespace tmkt {

/// Shortest round-trip decimal representation ('.' separator, locale
/// independent). Non-finite values print as "inf", "-inf" or "nan".
std::string format_double(double x);

}  // namespace tmkt
