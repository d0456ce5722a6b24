#pragma once

#include <stdexcept>
#include <string>

namespace envsos {

/// Root of every error the library throws. `kind()` is a stable identifier
/// used by the CLI diagnostics and by tests.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define ENVSOS_ERROR(Name)                                   \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what) : Error(#Name, what) {} \
  }

ENVSOS_ERROR(ParseError);
ENVSOS_ERROR(AntisymmetryViolation);
ENVSOS_ERROR(JacobiViolation);
ENVSOS_ERROR(UnknownAlgebra);
ENVSOS_ERROR(AlgebraMismatch);
ENVSOS_ERROR(DegreeMismatch);
ENVSOS_ERROR(NonRealSymbol);
ENVSOS_ERROR(SyntaxError);
ENVSOS_ERROR(UnknownIdentifier);
ENVSOS_ERROR(CyclicAlias);
ENVSOS_ERROR(NegativeExponent);
ENVSOS_ERROR(NotAbelian);
ENVSOS_ERROR(NotHermitean);
ENVSOS_ERROR(InvalidRepresentation);
ENVSOS_ERROR(OddDegreeTarget);
ENVSOS_ERROR(NotHomogeneous);
ENVSOS_ERROR(NonCentralA);
ENVSOS_ERROR(ContextInvalid);
ENVSOS_ERROR(InvalidInstance);

#undef ENVSOS_ERROR

/// Syntax errors carry the byte offset of the offending token.
class PositionedSyntaxError : public SyntaxError {
 public:
  PositionedSyntaxError(std::size_t pos, const std::string& what)
      : SyntaxError("at position " + std::to_string(pos) + ": " + what), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

}  // namespace envsos
