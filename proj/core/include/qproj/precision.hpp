#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qproj {

enum class Precision { Double, Extended };

Precision parse_precision(std::string_view s);
std::string_view to_string(Precision p);

// Raised when a computation cannot meet its accuracy contract.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qproj
