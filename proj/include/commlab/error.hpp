#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace commlab {

// Base for all library errors. The CLI maps each kind to an exit code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class UncoveredCell : public Error {
 public:
  using Error::Error;
};

class InvalidSelector : public Error {
 public:
  using Error::Error;
};

class InvalidTree : public Error {
 public:
  using Error::Error;
};

class GenerationFailure : public Error {
 public:
  GenerationFailure(const std::string& what, std::uint64_t seed)
      : Error(what + " (seed " + std::to_string(seed) + ")"), seed_(seed) {}
  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

class DegenerateInstance : public Error {
 public:
  using Error::Error;
};

}  // namespace commlab
