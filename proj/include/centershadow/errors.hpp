#pragma once

#include <stdexcept>
#include <string>

namespace cshadow {

enum class Err {
  NotHyperbolic,
  NotUnimodular,
  TooFar,
  WrongModel,
  BudgetExceeded,
  DecorationMismatch,
  NotPeriodic,
  NoPeriodicLeafFound,
  MalformedSequence,
  Overflow,
  BadInput,
};

const char* err_name(Err e);

struct Error : std::runtime_error {
  Err code;
  Error(Err c, const std::string& msg)
      : std::runtime_error(std::string(err_name(c)) + ": " + msg), code(c) {}
};

} // namespace cshadow
