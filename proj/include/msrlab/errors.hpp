#pragma once

#include <stdexcept>
#include <string>

namespace msrlab {

// Base of every error raised by the library. Callers that only need to
// distinguish "bad input" from "property violated" catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define MSRLAB_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                       \
   public:                                                           \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

MSRLAB_DEFINE_ERROR(DivisionByZero);
MSRLAB_DEFINE_ERROR(FieldError);
MSRLAB_DEFINE_ERROR(ShapeError);
MSRLAB_DEFINE_ERROR(SingularError);
MSRLAB_DEFINE_ERROR(SingularSystem);
MSRLAB_DEFINE_ERROR(NotInvariant);
MSRLAB_DEFINE_ERROR(RangeError);
MSRLAB_DEFINE_ERROR(ParamError);
MSRLAB_DEFINE_ERROR(SchemeInvalid);
MSRLAB_DEFINE_ERROR(SingularStack);
MSRLAB_DEFINE_ERROR(FamilyTooLarge);
MSRLAB_DEFINE_ERROR(NonSpanningBlock);
MSRLAB_DEFINE_ERROR(TooLarge);
MSRLAB_DEFINE_ERROR(ParseError);

#undef MSRLAB_DEFINE_ERROR

}  // namespace msrlab
