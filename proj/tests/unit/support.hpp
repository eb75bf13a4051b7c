#pragma once

#include "kerr/log.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace testing_support {

// Collects library warnings for the lifetime of the object.
class WarningCapture {
 public:
  WarningCapture()
      : previous_(kerr::set_warning_handler(
            [this](std::string_view m) { messages_.emplace_back(m); })) {}
  ~WarningCapture() { kerr::set_warning_handler(previous_); }
  WarningCapture(const WarningCapture&) = delete;
  WarningCapture& operator=(const WarningCapture&) = delete;

  const std::vector<std::string>& messages() const { return messages_; }

 private:
  std::vector<std::string> messages_;
  kerr::WarningHandler previous_;
};

inline double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), 1e-300);
}

}  // namespace testing_support
