#pragma once

#include <string>

namespace patient {

/// Shortest decimal text that parses back to exactly `x`.
std::string format_number(double x);

}  // namespace patient
