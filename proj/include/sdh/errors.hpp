#pragma once

#include <stdexcept>
#include <string>

namespace sdh {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define SDH_ERROR(Name)                                        \
  struct Name : Error {                                        \
    explicit Name(const std::string& what) : Error(what) {}    \
  }

SDH_ERROR(DivisionByZero);
SDH_ERROR(ShapeError);
SDH_ERROR(FieldError);
SDH_ERROR(CategoryMismatch);
SDH_ERROR(BudgetExceeded);
SDH_ERROR(NotASubmodule);
SDH_ERROR(IndexError);
SDH_ERROR(NotInSubcategory);
SDH_ERROR(ConversionMismatch);
SDH_ERROR(SignConventionBroken);
SDH_ERROR(WindowExceeded);
SDH_ERROR(PreconditionError);
SDH_ERROR(InputError);

#undef SDH_ERROR

}  // namespace sdh
