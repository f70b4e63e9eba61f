// SPDX-License-Identifier: Apache-2.0
#include "wqed/errors.hpp"

namespace wqed {

namespace {

std::string join_issues(const std::vector<std::string>& issues) {
  std::string out = "invalid system configuration";
  for (const auto& issue : issues) {
    out += "; ";
    out += issue;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> issues)
    : Error(join_issues(issues)), issues_(std::move(issues)) {}

}  // namespace wqed
