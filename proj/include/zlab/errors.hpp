#ifndef ZLAB_ERRORS_HPP
#define ZLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace zlab {

struct GrowthViolation : std::runtime_error {
  int index;
  explicit GrowthViolation(int i)
      : std::runtime_error("coupling growth violation |J_i| > r^i at i = " + std::to_string(i)),
        index(i) {}
};

struct BudgetOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TreeOverflow : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyResidual : std::runtime_error {
  EmptyResidual() : std::runtime_error("cap requested on an empty residual index set") {}
};

struct QuadratureNonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PoleProximity : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TailNotNegligible : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NoRoot : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionViolated : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExtrapolationUnstable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace zlab

#endif
