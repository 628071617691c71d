#pragma once

#include <stdexcept>
#include <string>

// Contract checks that stay on in release builds. A failed check is a
// programming error, not a recoverable condition.
#define DGD_CHECK(cond, msg)                                              \
  do {                                                                    \
    if (!(cond)) throw std::logic_error(std::string("dgd check failed: ") + (msg)); \
  } while (0)
