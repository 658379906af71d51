#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "sleepcell/layout.hpp"

namespace sleepcell {

/// Regular pixel grid; pixel (ix, iy) covers
/// [origin + ix*res, origin + (ix+1)*res) on each axis.
struct GridSpec
{
  Point origin;
  double resolution = 5.0;
  std::size_t nx = 0;
  std::size_t ny = 0;

  std::size_t pixels () const { return nx * ny; }
  Point center (std::size_t ix, std::size_t iy) const
  {
    return Point{origin.x + (static_cast<double> (ix) + 0.5) * resolution,
                 origin.y + (static_cast<double> (iy) + 0.5) * resolution};
  }
  /// Linear pixel index of a location; out-of-grid points are clamped.
  std::size_t pixel_of (Point p) const;

  friend bool operator== (const GridSpec &, const GridSpec &) = default;
};

/// Grid covering `box` at `resolution` (partial edge pixels included).
GridSpec grid_for (const Box &box, double resolution);

struct ShadowingConfig
{
  double sigma_db = 8.0;
  double resolution_m = 5.0;
  double decorrelation_m = 50.0;
  /// Co-sited sectors share one field, as in the usual macro model.
  bool per_site = true;
};

/// Log-normal slow fading, one dB field per cell (possibly shared by
/// co-sited cells).
class ShadowingField
{
public:
  GridSpec grid;
  double sigma_db = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::vector<double>> fields;
  std::vector<std::size_t> field_of_cell;

  double at (std::size_t cell_index, std::size_t pixel) const
  {
    return fields[field_of_cell[cell_index]][pixel];
  }

  /// All-zero field, handy for geometry-only maps.
  static ShadowingField zero (const NetworkLayout &layout, double resolution);
};

/// Smoothed Gaussian noise standardised to exact sample mean 0 and sample
/// standard deviation `sigma_db` over the grid.
ShadowingField generate_shadowing (const NetworkLayout &layout,
                                   const ShadowingConfig &config,
                                   std::uint64_t seed);

/// Per-pixel received power of every cell plus the total received power.
class RadioMap
{
public:
  GridSpec grid;
  std::size_t cell_count = 0;
  std::vector<double> power_dbm;       // [pixel * cell_count + cell_index]
  std::vector<double> total_power_dbm; // [pixel]

  double power (std::size_t pixel, std::size_t cell_index) const
  {
    return power_dbm[pixel * cell_count + cell_index];
  }
};

RadioMap build_radio_map (const NetworkLayout &layout,
                          const ShadowingField &shadowing);

/// Strongest-cell map used to attribute event locations to cells.
class DominanceMap
{
public:
  GridSpec grid;
  std::vector<CellId> cells; // [iy * nx + ix]

  CellId at (Point p) const { return cells[grid.pixel_of (p)]; }
  CellId at (std::size_t ix, std::size_t iy) const
  {
    return cells[iy * grid.nx + ix];
  }
  /// Share of pixels dominated by `id`.
  double area_fraction (CellId id) const;

  friend bool operator== (const DominanceMap &, const DominanceMap &) = default;
};

/// Pixel cell = argmax of tx power - path loss + antenna gain + shadowing,
/// ties to the lowest cell id.
DominanceMap build_dominance_map (const NetworkLayout &layout,
                                  const ShadowingField &shadowing);
DominanceMap dominance_from_radio (const NetworkLayout &layout,
                                   const RadioMap &radio);

/// CSV with header "x_index,y_index,cell_id", row-major by y then x.
void write_dominance_csv (const std::filesystem::path &path,
                          const DominanceMap &map);
DominanceMap read_dominance_csv (const std::filesystem::path &path,
                                 const GridSpec &grid);

} // namespace sleepcell
