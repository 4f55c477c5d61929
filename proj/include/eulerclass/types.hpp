#ifndef EULERCLASS_TYPES_HPP
#define EULERCLASS_TYPES_HPP

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace eulerclass {

using Real = double;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Contract violation: a precondition stated in a function's interface failed.
class contract_error : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Evaluation requested outside a chart's parameter domain.
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw contract_error(what);
}

} // namespace eulerclass

#endif
