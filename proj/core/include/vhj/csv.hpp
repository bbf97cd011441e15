#pragma once

#include <string>
#include <vector>

#include "vhj/grid.hpp"

namespace vhj {

// CSV with a header row, '.' decimal separator, %.17g round-trip precision.
// 1D: i,x,value ; 2D: i,j,x,y,value.
void write_grid_function_csv(const GridFunction& u, const std::string& path);

// Generic numeric table.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

// Reads the value column back (validation / round-trip tests).
std::vector<double> read_value_column(const std::string& path);

std::string format_double(double v);

}  // namespace vhj
