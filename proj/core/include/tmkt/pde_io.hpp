#pragma once

#include <iosfwd>
#include <span>

#include "tmkt/pde_sim.hpp"

namespace tmkt {

/// `x,u,v` for two species, `x,u,v,u2,v2` for the two-country model.
void write_snapshot_csv(std::ostream& os, const Grid1D& grid, const Field& fields);

/// `t,deviation`
void write_deviation_csv(std::ostream& os, std::span<const DeviationSample> series);

/// Static SVG line plot of every species profile against x.
void write_profile_svg(std::ostream& os, const Grid1D& grid, const Field& fields);

}  // namespace tmkt
