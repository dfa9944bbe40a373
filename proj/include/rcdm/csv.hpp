#pragma once

#include <string>
#include <vector>

#include "rcdm/common.hpp"

namespace rcdm {

// CSV conventions: '.' decimal separator, header row, LF line endings,
// 17 significant digits.
std::string format_value(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;  // non-numeric cells become NaN
};

Table read_csv(const std::string& path);

}  // namespace rcdm
