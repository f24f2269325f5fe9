#pragma once

#include "sklevy/grid_path.hpp"

namespace sklevy {

/// sup_t |x(t) - y(t)|, exact under both paths' interpolation conventions
/// (evaluated at the union of grid nodes and their left limits).
double uniform_distance(const GridPath& x, const GridPath& y);

/// int_0^T |x(t) - y(t)| dt with closed-form segment integrals.
double l1_distance(const GridPath& x, const GridPath& y);

struct SkorokhodOptions {
  // Half-width (in time) of the first banded pass; 0 picks a default from
  // the grids. The result is exact for every choice.
  double initial_band = 0.0;
};

/// inf over strictly increasing bijections lambda of
/// max(||lambda - id||_inf, ||x - y o lambda||_inf) for two cadlag step paths.
///
/// Each lambda induces a monotone lattice path over (segment of x, segment of
/// y) overlaps; for a fixed lattice path the infimum of ||lambda - id|| is the
/// maximum over its events of the cost of placing the event, so the minimum
/// over lattice paths is computed by a min-max dynamic program.
double skorokhod_distance(const GridPath& x, const GridPath& y, const SkorokhodOptions& options = {});

}  // namespace sklevy
