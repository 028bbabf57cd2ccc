#include "cbvs/dataset.hpp"

#include <cmath>
#include <string>

#include "cbvs/errors.hpp"

namespace cbvs {

namespace {

constexpr double kStandardizedTol = 1e-10;

double column_variance(const Eigen::VectorXd& col) {
  const double m = col.mean();
  if (col.size() < 2) return 0.0;
  return (col.array() - m).square().sum() / static_cast<double>(col.size() - 1);
}

}  // namespace

void Dataset::validate() const {
  if (y.size() < 1 || x.cols() < 1)
    throw PreconditionError("dataset requires n >= 1 and p >= 1");
  if (x.rows() != y.size())
    throw PreconditionError("design matrix has " + std::to_string(x.rows()) +
                            " rows but response has " + std::to_string(y.size()));
  if (!y.allFinite() || !x.allFinite())
    throw PreconditionError("dataset contains non-finite entries");
  if (standardized) {
    if (std::abs(y.mean()) > kStandardizedTol)
      throw PreconditionError("standardized flag set but y is not centred");
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      const double m = x.col(j).mean();
      const double v = column_variance(x.col(j));
      if (std::abs(m) > kStandardizedTol ||
          (v > 0 && std::abs(v - 1.0) > kStandardizedTol))
        throw PreconditionError("standardized flag set but column " +
                                std::to_string(j) + " is not standardized");
    }
  }
}

Dataset standardize(const Dataset& data) {
  Dataset out = data;
  const auto n = data.n();
  const auto p = data.p();
  out.column_means.resize(p);
  out.column_scales.resize(p);
  out.y_mean = data.y.mean();
  out.y = data.y.array() - out.y_mean;
  for (Eigen::Index j = 0; j < p; ++j) {
    const double m = data.x.col(j).mean();
    double v = 0.0;
    if (n > 1) v = (data.x.col(j).array() - m).square().sum() / static_cast<double>(n - 1);
    const double scale = v > 0 ? std::sqrt(v) : 1.0;
    out.column_means(j) = m;
    out.column_scales(j) = scale;
    out.x.col(j) = (data.x.col(j).array() - m) / scale;
  }
  // chain the records when standardizing twice
  if (data.standardized && data.column_means.size() == p) {
    for (Eigen::Index j = 0; j < p; ++j) {
      out.column_means(j) = data.column_means(j) + out.column_means(j) * data.column_scales(j);
      out.column_scales(j) *= data.column_scales(j);
    }
    out.y_mean += data.y_mean;
  }
  out.standardized = true;
  return out;
}

}  // namespace cbvs
