#pragma once

namespace expou {

inline constexpr const char* version = "1.0.0";

}
