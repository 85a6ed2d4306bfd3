#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ksign {

enum class Errc {
  not_squarefree,
  not_coprime,
  weil_violation,
  domain_error,
  cutoff_required,
  slow_decay,
  no_feasible_point,
  range_too_large,
  empty_interval,
  range_error,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::not_squarefree: return "NotSquarefree";
    case Errc::not_coprime: return "NotCoprime";
    case Errc::weil_violation: return "WeilViolation";
    case Errc::domain_error: return "DomainError";
    case Errc::cutoff_required: return "CutoffRequired";
    case Errc::slow_decay: return "SlowDecay";
    case Errc::no_feasible_point: return "NoFeasiblePoint";
    case Errc::range_too_large: return "RangeTooLarge";
    case Errc::empty_interval: return "EmptyInterval";
    case Errc::range_error: return "RangeError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace ksign
