#pragma once

#include <string_view>

namespace puk {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

}  // namespace puk
