// SPDX-License-Identifier: Apache-2.0
#include "wqed/version.hpp"

namespace wqed {

std::string_view version() noexcept { return WQED_VERSION; }

}  // namespace wqed
