#pragma once

#include <stdexcept>
#include <string>

namespace semirfd {

  // Base for every error raised by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // Malformed input: presentation documents, configs, polynomials.
  class ParseError : public Error {
   public:
    using Error::Error;
  };

  // A parameter is outside the operation's domain.
  class InvalidArgument : public Error {
   public:
    using Error::Error;
  };

  // A table or truncation is not deep enough to evaluate something exactly.
  class DepthError : public Error {
   public:
    using Error::Error;
  };

  // A configured cap (word count, matrix size) was hit.
  class ResourceLimit : public Error {
   public:
    using Error::Error;
  };

  // An identity that must hold did not. Carries a human-readable witness.
  class InvariantFailure : public Error {
   public:
    using Error::Error;
  };

  // Iterative norm computation did not converge.
  class NonConvergence : public Error {
   public:
    NonConvergence(std::string const& msg, double residual)
        : Error(msg), _residual(residual) {}
    double residual() const noexcept {
      return _residual;
    }

   private:
    double _residual;
  };

}  // namespace semirfd
