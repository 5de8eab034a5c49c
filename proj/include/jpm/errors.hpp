// errors.hpp — exception types thrown across the library

#pragma once

#include <stdexcept>
#include <string>

namespace jpm {

class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
  public:
    explicit DimensionMismatch(const std::string& m) : Error("DimensionMismatch: " + m) {}
};

// The protective protocol presupposes a non-degenerate spectrum; refuse rather
// than silently proceed when two eigenvalues collide.
class DegenerateSpectrum : public Error {
  public:
    explicit DegenerateSpectrum(const std::string& m) : Error("DegenerateSpectrum: " + m) {}
};

class NonPositiveDispersion : public Error {
  public:
    explicit NonPositiveDispersion(const std::string& m) : Error("NonPositiveDispersion: " + m) {}
};

class BlochVectorTooLong : public Error {
  public:
    explicit BlochVectorTooLong(const std::string& m) : Error("BlochVectorTooLong: " + m) {}
};

class NonUnitAxis : public Error {
  public:
    explicit NonUnitAxis(const std::string& m) : Error("NonUnitAxis: " + m) {}
};

class AmbiguousBranch : public Error {
  public:
    explicit AmbiguousBranch(const std::string& m) : Error("AmbiguousBranch: " + m) {}
};

class DegenerateSampleCloud : public Error {
  public:
    explicit DegenerateSampleCloud(const std::string& m) : Error("DegenerateSampleCloud: " + m) {}
};

// Violated construction invariant (normalization, Hermiticity, weight sums...).
class InvalidState : public Error {
  public:
    explicit InvalidState(const std::string& m) : Error("InvalidState: " + m) {}
};

// Bad run configuration; the CLI maps this to exit code 2.
class ConfigInvalid : public Error {
  public:
    explicit ConfigInvalid(const std::string& m) : Error("ConfigInvalid: " + m) {}
};

} // namespace jpm
