#pragma once

#include <stdexcept>
#include <string>

namespace rmtcorr {

/// Raised whenever an operation rejects its input. The message names the
/// offending field, row, or coordinate.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rmtcorr
