#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace erz {

// Base class; every error raised by the library derives from it.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class GridMismatch : public Error {
  public:
    GridMismatch() : Error("fields live on different grids") {}
};

class NonFinite : public Error {
  public:
    using Error::Error;
};

class NonPositiveDensity : public Error {
  public:
    explicit NonPositiveDensity(double min_value)
        : Error("density must be strictly positive (min = " + std::to_string(min_value) + ")"),
          min_value(min_value) {}
    double min_value;
};

class ZeroWavevector : public Error {
  public:
    ZeroWavevector() : Error("wavevector must be nonzero") {}
};

class WrongRegime : public Error {
  public:
    using Error::Error;
};

class ParticleCollision : public Error {
  public:
    ParticleCollision(std::size_t i, std::size_t j)
        : Error("particles " + std::to_string(i) + " and " + std::to_string(j) +
                " collided with zero softening"),
          first(i), second(j) {}
    std::size_t first;
    std::size_t second;
};

class TupleOrderMismatch : public Error {
  public:
    using Error::Error;
};

class NonPositiveFunction : public Error {
  public:
    using Error::Error;
};

class IoError : public Error {
  public:
    using Error::Error;
};

class FormatError : public Error {
  public:
    using Error::Error;
};

// Collects every violation found while validating a configuration.
class SchemaError : public Error {
  public:
    explicit SchemaError(std::vector<std::string> violations)
        : Error(join(violations)), violations(std::move(violations)) {}
    std::vector<std::string> violations;

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid configuration:";
        for (const auto& s : v) out += "\n  - " + s;
        return out;
    }
};

}  // namespace erz
