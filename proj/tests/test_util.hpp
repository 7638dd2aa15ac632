// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>
#include <utility>

namespace testutil {

/// True when fn() throws an E whose message contains `needle`.
template <typename E, typename Fn>
bool throws_with(Fn&& fn, std::string_view needle) {
  try {
    std::forward<Fn>(fn)();
  } catch (const E& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  } catch (...) {
    return false;
  }
  return false;
}

}  // namespace testutil
