#pragma once

#include <stdexcept>
#include <string>

namespace textsim {

/// Error type thrown for bad input data, malformed files and violated
/// call contracts. The message carries the offending location (file,
/// line number, pair id) whenever one is known.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace textsim
