#pragma once

#include <stdexcept>

namespace teamnego {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// offer/profile shape does not fit the domain it is evaluated against
struct DomainMismatchError : Error {
  using Error::Error;
};

// operation needs a finite enumeration but the domain has a continuous part
struct UnsupportedDomainError : Error {
  using Error::Error;
};

// rejection sampling ran out of budget, or constraints are unsatisfiable
struct GenerationError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// a runtime guarantee of the mediated protocol was violated
struct ProtocolError : Error {
  using Error::Error;
};

struct BudgetError : Error {
  using Error::Error;
};

}  // namespace teamnego
