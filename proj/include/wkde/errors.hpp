#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace wkde {

//! Library error carrying a stable machine-readable name (e.g. "EmptySample",
//! "NonPositiveBandwidth") next to the human-readable message. The CLI maps
//! these to exit code 3 and prints the name.
class Error : public std::runtime_error {
public:
  Error(std::string name, const std::string& what)
    : std::runtime_error(name + ": " + what)
    , name_(std::move(name))
  {
  }

  const std::string& name() const { return name_; }

private:
  std::string name_;
};

} // namespace wkde
