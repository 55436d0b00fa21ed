#pragma once

#include <string>

namespace slants {

/// 12 significant digits, independent of the global locale.
[[nodiscard]] std::string format_number(double value);

}  // namespace slants
