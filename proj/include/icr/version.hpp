#pragma once

#include <string_view>

namespace icr {

/// git-describe style version baked in at configure time.
std::string_view version() noexcept;

}  // namespace icr
