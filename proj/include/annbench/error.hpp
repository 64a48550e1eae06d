#pragma once

#include <stdexcept>
#include <string>

namespace annbench {

// Every precondition violation and I/O failure surfaces as this type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define ANNBENCH_CHECK(cond, msg)                   \
  do {                                              \
    if (!(cond)) throw ::annbench::Error(msg);      \
  } while (0)

}  // namespace annbench
