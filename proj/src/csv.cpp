#include "cbvs/csv.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

#include "cbvs/errors.hpp"

namespace cbvs {
namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

double parse_cell(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string cell = trim(raw);
  auto fail = [&](const char* what) {
    std::ostringstream os;
    os << what << " at row " << row << ", column " << col + 1 << ": \"" << cell
       << "\"";
    throw PreconditionError(os.str());
  };
  if (cell.empty()) fail("missing value");
  double value = 0;
  const auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc{} || ptr != cell.data() + cell.size())
    fail("non-numeric cell");
  return value;
}

}  // namespace

Dataset load_csv(const std::string& path, const std::string& response_column,
                 bool standardize_data) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);

  std::string line;
  if (!std::getline(in, line)) throw PreconditionError(path + " is empty");
  std::vector<std::string> header = split_row(line);
  for (auto& h : header) h = trim(h);

  Eigen::Index response = -1;
  for (std::size_t j = 0; j < header.size(); ++j)
    if (header[j] == response_column) response = static_cast<Eigen::Index>(j);
  if (response < 0) {
    // fall back to a 0-based column index
    std::size_t idx = 0;
    const auto [ptr, ec] = std::from_chars(
        response_column.data(), response_column.data() + response_column.size(),
        idx);
    if (ec == std::errc{} && ptr == response_column.data() + response_column.size() &&
        idx < header.size())
      response = static_cast<Eigen::Index>(idx);
  }
  if (response < 0)
    throw PreconditionError("response column \"" + response_column +
                            "\" not found in " + path);
  if (header.size() < 2)
    throw PreconditionError(path + " needs at least one predictor column");

  std::vector<std::vector<double>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_row(line);
    if (cells.size() != header.size()) {
      std::ostringstream os;
      os << "ragged row " << lineno << " in " << path << ": expected "
         << header.size() << " cells, got " << cells.size();
      throw PreconditionError(os.str());
    }
    std::vector<double> parsed(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j)
      parsed[j] = parse_cell(cells[j], lineno, j);
    rows.push_back(std::move(parsed));
  }
  if (rows.empty()) throw PreconditionError(path + " has no data rows");

  Dataset data;
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(header.size()) - 1;
  data.y.resize(n);
  data.x.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(header.size()); ++j) {
      const double v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (j == response)
        data.y(i) = v;
      else
        data.x(i, c++) = v;
    }
  }
  if (standardize_data) data = standardize(data);
  data.validate();
  return data;
}

void save_csv(const std::string& path, const Dataset& data) {
  std::ofstream out(path);
  if (!out) throw PreconditionError("cannot write " + path);
  out << "y";
  for (Eigen::Index j = 0; j < data.p(); ++j) out << ",x" << j + 1;
  out << "\n";
  out.precision(17);
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out << data.y(i);
    for (Eigen::Index j = 0; j < data.p(); ++j) out << "," << data.x(i, j);
    out << "\n";
  }
  if (!out) throw PreconditionError("write failed for " + path);
}

}  // namespace cbvs
