#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sleepcell/events.hpp"

namespace sleepcell {

struct Cell
{
  CellId id = 0;
  Point site;
  /// Boresight in degrees counter-clockwise from +x. Empty for omni cells.
  std::optional<double> azimuth_deg;
  double tx_power_dbm = 46.0;
};

/// Axis-aligned rectangle covering the simulated area.
struct Box
{
  Point min;
  Point max;

  double width () const { return max.x - min.x; }
  double height () const { return max.y - min.y; }
  bool contains (Point p) const
  {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
};

struct LayoutConfig
{
  double isd_m = 500.0;
  double tx_power_dbm = 46.0;
  bool sectorized = true;
  bool wrap_around = true;
  /// Simulated area is [-half_width, half_width] x [-half_height, half_height].
  /// The defaults give the area of one 7-site wrap-around cluster.
  double half_width_m = 650.0;
  double half_height_m = 582.5;
  CellId first_cell_id = 1;
};

class NetworkLayout
{
public:
  std::vector<Cell> cells;
  double inter_site_distance = 500.0;
  bool wrap_around = false;
  Box bounds;
  /// Translations applied to every site when evaluating links. Always
  /// contains the zero offset; wrap-around adds the six cluster images.
  std::vector<Point> site_images{Point{}};
  /// Symmetric, irreflexive adjacency; one sorted id list per cell index.
  std::vector<std::vector<CellId>> neighbors;

  std::size_t size () const { return cells.size (); }
  bool contains (CellId id) const;
  /// Position of a cell in `cells`. Throws ConfigError for unknown ids.
  std::size_t index_of (CellId id) const;
  std::vector<CellId> cell_ids () const;
  const std::vector<CellId> &neighbors_of (CellId id) const;
  bool adjacent (CellId a, CellId b) const;

  /// Checks id contiguity and the adjacency invariants.
  void validate () const;
};

/// 7 sites x 3 sectors (or 7 omni cells) on a hexagonal grid, ids assigned
/// site-major starting at `first_cell_id`. Neighbours are derived from the
/// shadowing-free best-server map.
NetworkLayout make_hex_layout (const LayoutConfig &config);

/// Macro path loss 128.1 + 37.6 log10(d[km]) with d floored at 35 m.
double pathloss_db (double distance_m);

/// Three-sector parabolic pattern, 70 degree beamwidth, 20 dB floor.
double antenna_gain_db (const Cell &cell, Point site, Point at);

/// Best (over site images) antenna gain minus path loss from cell to `at`.
double link_gain_db (const NetworkLayout &layout, std::size_t cell_index,
                     Point at);

/// Received power from a cell at `at`, before shadowing.
double cell_power_dbm (const NetworkLayout &layout, std::size_t cell_index,
                       Point at);

/// Marks two cells adjacent when their shadowing-free best-server areas share
/// a border, sampled at `resolution_m` over the bounds grown by `margin_m`.
void derive_neighbors (NetworkLayout &layout, double resolution_m = 10.0,
                       double margin_m = 100.0);

} // namespace sleepcell
