#include "cbvs/hyperparameters.hpp"

#include "cbvs/errors.hpp"

namespace cbvs {

std::vector<std::string> Hyperparameters::validate() const {
  if (!(tau0 > 0) || !(tau1 > 0))
    throw PreconditionError("tau0 and tau1 must be positive");
  if (!(tau0 < tau1)) throw PreconditionError("tau0 must be smaller than tau1");
  if (!(s > 0) || !(a > 0) || !(b > 0))
    throw PreconditionError("s, a, b must be positive");
  std::vector<std::string> warnings;
  if (tau0 >= 1.0)
    warnings.push_back("tau0 >= 1: the spike component is not concentrated at zero");
  if (tau1 < 1.0)
    warnings.push_back("tau1 < 1: the slab component is narrow");
  return warnings;
}

AlphaBox AlphaBox::uniform(Eigen::Index p, double lo, double hi) {
  AlphaBox box;
  box.lo = Eigen::VectorXd::Constant(p, lo);
  box.hi = Eigen::VectorXd::Constant(p, hi);
  box.validate();
  return box;
}

void AlphaBox::validate() const {
  if (lo.size() != hi.size() || lo.size() < 1)
    throw PreconditionError("alpha box bounds must be non-empty and equal length");
  for (Eigen::Index j = 0; j < lo.size(); ++j) {
    if (!(0.0 < lo(j) && lo(j) <= hi(j) && hi(j) < 1.0))
      throw PreconditionError("alpha box entry " + std::to_string(j) +
                              " violates 0 < lo <= hi < 1");
  }
}

}  // namespace cbvs
