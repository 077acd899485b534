#pragma once

#include <stdexcept>
#include <string>

namespace qtsallis {

// Every library failure derives from Error so callers can catch one type.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define QTSALLIS_DEFINE_ERROR(Name)        \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

QTSALLIS_DEFINE_ERROR(NonHermitianInput);
QTSALLIS_DEFINE_ERROR(ConvergenceFailure);
QTSALLIS_DEFINE_ERROR(DomainViolation);
QTSALLIS_DEFINE_ERROR(DimensionMismatch);
QTSALLIS_DEFINE_ERROR(NotPSD);
QTSALLIS_DEFINE_ERROR(NotNormalized);
QTSALLIS_DEFINE_ERROR(BadSpectrum);
QTSALLIS_DEFINE_ERROR(BadFactorization);
QTSALLIS_DEFINE_ERROR(QOutOfRange);
QTSALLIS_DEFINE_ERROR(PreconditionFailed);
QTSALLIS_DEFINE_ERROR(ConfigError);
QTSALLIS_DEFINE_ERROR(IOError);
QTSALLIS_DEFINE_ERROR(ParseError);
// Arithmetic produced NaN or overflowed where the math says it cannot.
QTSALLIS_DEFINE_ERROR(InternalError);

#undef QTSALLIS_DEFINE_ERROR

}  // namespace qtsallis
