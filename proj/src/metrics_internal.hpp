#pragma once

#include <span>
#include <vector>

#include "sklevy/grid_path.hpp"

namespace sklevy::detail {

void check_comparable(const GridPath& x, const GridPath& y);
bool same_grid(const GridPath& x, const GridPath& y);
std::vector<double> merged_times(const GridPath& x, const GridPath& y);
double norm(std::span<const double> a, std::span<const double> b);

}  // namespace sklevy::detail
