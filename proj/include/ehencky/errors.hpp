#pragma once

#include <stdexcept>
#include <string>

namespace ehencky {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// det F <= 0 where an invertible deformation gradient is required.
struct NonInvertible : Error {
  using Error::Error;
};

struct NotSPD : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

struct UnsupportedExponent : Error {
  using Error::Error;
};

struct InvalidWeights : Error {
  using Error::Error;
};

struct InvalidParams : Error {
  using Error::Error;
};

// Energy gradient requested at a state whose total energy is +inf.
struct InadmissibleState : Error {
  using Error::Error;
};

}  // namespace ehencky
