#pragma once

#include <string>

#include "cbvs/dataset.hpp"

namespace cbvs {

/// Reads a rectangular numeric CSV with a mandatory header row. The response
/// column may be named or given as a 0-based index string. Throws
/// PreconditionError with the row/column location on missing values,
/// non-numeric cells or ragged rows.
Dataset load_csv(const std::string& path, const std::string& response_column,
                 bool standardize_data);

/// Writes y as column "y" and predictors as x1..xp, 17 significant digits.
void save_csv(const std::string& path, const Dataset& data);

}  // namespace cbvs
