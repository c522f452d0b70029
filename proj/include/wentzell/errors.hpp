#ifndef WENTZELL_ERRORS_HPP
#define WENTZELL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wentzell {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define WENTZELL_DEFINE_ERROR(Name)      \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  };

WENTZELL_DEFINE_ERROR(DimensionMismatch)
WENTZELL_DEFINE_ERROR(NonFiniteEntry)
WENTZELL_DEFINE_ERROR(SingularMatrix)
WENTZELL_DEFINE_ERROR(Overflow)
WENTZELL_DEFINE_ERROR(NoConvergence)
WENTZELL_DEFINE_ERROR(TagMismatch)
WENTZELL_DEFINE_ERROR(PositivityViolation)
WENTZELL_DEFINE_ERROR(BadDimensions)
WENTZELL_DEFINE_ERROR(ResolventPole)
WENTZELL_DEFINE_ERROR(SpectrumHit)
WENTZELL_DEFINE_ERROR(DegenerateConstraint)
WENTZELL_DEFINE_ERROR(AssumptionFailed)
WENTZELL_DEFINE_ERROR(BoundFails)
WENTZELL_DEFINE_ERROR(BadParameters)
WENTZELL_DEFINE_ERROR(ConfigError)
WENTZELL_DEFINE_ERROR(IoError)

#undef WENTZELL_DEFINE_ERROR

}  // namespace wentzell

#endif
