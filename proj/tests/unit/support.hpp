#pragma once

#include <functional>

#include "doctest.h"
#include "kscars/error.hpp"

namespace kscars::testing {

/// Kind of the kscars::Error thrown by fn; fails the test when nothing is thrown.
inline ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected a kscars::Error");
  return ErrorKind::Io;
}

}  // namespace kscars::testing
