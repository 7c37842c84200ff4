#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

struct WrongMode : std::logic_error {
  using std::logic_error::logic_error;
};

struct IntegrationFailure : std::runtime_error {
  IntegrationFailure(const std::string& what, double t_seconds)
      : std::runtime_error(what), time(t_seconds) {}
  double time;
};

struct ProtocolError : std::runtime_error {
  ProtocolError(const std::string& what, int step_index)
      : std::runtime_error(what), step(step_index) {}
  int step;
};

struct SolverFailure : std::runtime_error {
  SolverFailure(const std::string& what, double r)
      : std::runtime_error(what), residual(r) {}
  double residual;
};

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dicke
