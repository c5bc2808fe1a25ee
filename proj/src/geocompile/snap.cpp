#include <cmath>
#include <set>

#include "hamsim/geocompile.hpp"

namespace hamsim {

Point grid_position(const GridPoint& g, double spacing) {
  Point p(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) p[i] = g[i] * spacing;
  return p;
}

SnapResult snap_to_grid(const EmbeddedGraph& G, double spacing) {
  if (!(spacing > 0.0)) throw Error(Error::Kind::structural, "grid spacing must be positive");
  G.validate();
  SnapResult r;
  r.spacing = spacing;
  const double floor_spacing = spacing * std::ldexp(1.0, -20);
  for (;;) {
    r.grid.assign(G.size(), GridPoint(G.D));
    std::set<GridPoint> used;
    bool ok = true;
    for (std::size_t i = 0; i < G.size() && ok; ++i) {
      for (int d = 0; d < G.D; ++d) r.grid[i][d] = static_cast<int>(std::lround(G.coords[i][d] / r.spacing));
      ok = used.insert(r.grid[i]).second;
    }
    if (ok) break;
    r.spacing /= 2;
    ++r.halvings;
    if (r.spacing < floor_spacing)
      throw Error(Error::Kind::structural, "snapping spacing fell below 2^-20 of the start; input is not geometrically local");
  }
  r.max_displacement = 0.0;
  for (std::size_t i = 0; i < G.size(); ++i)
    r.max_displacement = std::max(r.max_displacement, distance(G.coords[i], grid_position(r.grid[i], r.spacing)));
  return r;
}

}  // namespace hamsim
