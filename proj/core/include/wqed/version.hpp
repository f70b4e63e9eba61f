// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace wqed {

std::string_view version() noexcept;

}  // namespace wqed
