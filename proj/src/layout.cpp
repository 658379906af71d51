#include "sleepcell/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sleepcell/error.hpp"

namespace sleepcell {

bool
NetworkLayout::contains (CellId id) const
{
  if (cells.empty ())
    {
      return false;
    }
  const auto offset = static_cast<long> (id) - cells.front ().id;
  return offset >= 0 && offset < static_cast<long> (cells.size ());
}

std::size_t
NetworkLayout::index_of (CellId id) const
{
  if (!contains (id))
    {
      throw ConfigError ("unknown cell id " + std::to_string (id));
    }
  return static_cast<std::size_t> (id - cells.front ().id);
}

std::vector<CellId>
NetworkLayout::cell_ids () const
{
  std::vector<CellId> ids;
  ids.reserve (cells.size ());
  for (const auto &c : cells)
    {
      ids.push_back (c.id);
    }
  return ids;
}

const std::vector<CellId> &
NetworkLayout::neighbors_of (CellId id) const
{
  return neighbors.at (index_of (id));
}

bool
NetworkLayout::adjacent (CellId a, CellId b) const
{
  const auto &n = neighbors_of (a);
  return std::binary_search (n.begin (), n.end (), b);
}

void
NetworkLayout::validate () const
{
  if (cells.empty ())
    {
      throw ConfigError ("layout has no cells");
    }
  for (std::size_t i = 0; i < cells.size (); ++i)
    {
      if (cells[i].id != cells.front ().id + static_cast<CellId> (i))
        {
          throw ConfigError ("cell ids must be contiguous");
        }
    }
  if (cells.front ().id != 0 && cells.front ().id != 1)
    {
      throw ConfigError ("cell ids must start at 0 or 1");
    }
  if (neighbors.size () != cells.size ())
    {
      throw ConfigError ("neighbour relation does not cover every cell");
    }
  for (const auto &c : cells)
    {
      const auto &n = neighbors_of (c.id);
      if (n.empty ())
        {
          throw ConfigError ("cell " + std::to_string (c.id)
                             + " has no neighbours");
        }
      for (CellId other : n)
        {
          if (other == c.id || !adjacent (other, c.id))
            {
              throw ConfigError ("neighbour relation must be symmetric and "
                                 "irreflexive (cell "
                                 + std::to_string (c.id) + ")");
            }
        }
    }
}

double
pathloss_db (double distance_m)
{
  const double d_km = std::max (distance_m, 35.0) / 1000.0;
  return 128.1 + 37.6 * std::log10 (d_km);
}

double
antenna_gain_db (const Cell &cell, Point site, Point at)
{
  if (!cell.azimuth_deg)
    {
      return 0.0;
    }
  const double bearing = std::atan2 (at.y - site.y, at.x - site.x) * 180.0
                         / std::numbers::pi;
  double off = std::fmod (bearing - *cell.azimuth_deg, 360.0);
  if (off > 180.0)
    {
      off -= 360.0;
    }
  else if (off < -180.0)
    {
      off += 360.0;
    }
  const double ratio = off / 70.0;
  return -std::min (12.0 * ratio * ratio, 20.0);
}

double
link_gain_db (const NetworkLayout &layout, std::size_t cell_index, Point at)
{
  const Cell &cell = layout.cells.at (cell_index);
  double best = -std::numeric_limits<double>::infinity ();
  for (const Point &shift : layout.site_images)
    {
      const Point site{cell.site.x + shift.x, cell.site.y + shift.y};
      const double d = std::hypot (at.x - site.x, at.y - site.y);
      best = std::max (best, antenna_gain_db (cell, site, at) - pathloss_db (d));
    }
  return best;
}

double
cell_power_dbm (const NetworkLayout &layout, std::size_t cell_index, Point at)
{
  return layout.cells.at (cell_index).tx_power_dbm
         + link_gain_db (layout, cell_index, at);
}

void
derive_neighbors (NetworkLayout &layout, double resolution_m, double margin_m)
{
  const std::size_t n = layout.size ();
  layout.neighbors.assign (n, {});
  if (n < 2)
    {
      return;
    }

  const double margin = margin_m;
  const Point lo{layout.bounds.min.x - margin, layout.bounds.min.y - margin};
  const auto nx = static_cast<std::size_t> (
    std::ceil ((layout.bounds.width () + 2 * margin) / resolution_m));
  const auto ny = static_cast<std::size_t> (
    std::ceil ((layout.bounds.height () + 2 * margin) / resolution_m));

  std::vector<std::size_t> best (nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy)
    {
      for (std::size_t ix = 0; ix < nx; ++ix)
        {
          const Point p{lo.x + (ix + 0.5) * resolution_m,
                        lo.y + (iy + 0.5) * resolution_m};
          std::size_t arg = 0;
          double top = cell_power_dbm (layout, 0, p);
          for (std::size_t c = 1; c < n; ++c)
            {
              const double v = cell_power_dbm (layout, c, p);
              if (v > top)
                {
                  top = v;
                  arg = c;
                }
            }
          best[iy * nx + ix] = arg;
        }
    }

  // Count shared border pixels; isolated corner contacts are ignored.
  std::vector<std::size_t> border (n * n, 0);
  auto touch = [&] (std::size_t a, std::size_t b) {
    if (a != b)
      {
        ++border[a * n + b];
        ++border[b * n + a];
      }
  };
  for (std::size_t iy = 0; iy < ny; ++iy)
    {
      for (std::size_t ix = 0; ix < nx; ++ix)
        {
          const std::size_t here = best[iy * nx + ix];
          if (ix + 1 < nx)
            {
              touch (here, best[iy * nx + ix + 1]);
            }
          if (iy + 1 < ny)
            {
              touch (here, best[(iy + 1) * nx + ix]);
            }
        }
    }

  const std::size_t min_border = 3;
  for (std::size_t a = 0; a < n; ++a)
    {
      for (std::size_t b = 0; b < n; ++b)
        {
          if (border[a * n + b] >= min_border)
            {
              layout.neighbors[a].push_back (layout.cells[b].id);
            }
        }
    }
}

NetworkLayout
make_hex_layout (const LayoutConfig &config)
{
  if (!(config.isd_m > 0.0) || !(config.half_width_m > 0.0)
      || !(config.half_height_m > 0.0))
    {
      throw ConfigError ("layout dimensions must be positive");
    }
  if (config.first_cell_id != 0 && config.first_cell_id != 1)
    {
      throw ConfigError ("first cell id must be 0 or 1");
    }

  NetworkLayout layout;
  layout.inter_site_distance = config.isd_m;
  layout.wrap_around = config.wrap_around;
  layout.bounds = Box{Point{-config.half_width_m, -config.half_height_m},
                      Point{config.half_width_m, config.half_height_m}};

  // Axial hex coordinates: q along +x, r along 60 degrees.
  const double isd = config.isd_m;
  auto axial = [isd] (int q, int r) {
    return Point{isd * (q + 0.5 * r), isd * (std::sqrt (3.0) / 2.0) * r};
  };
  const int ring[7][2] = {{0, 0},  {1, 0},  {0, 1}, {-1, 1},
                          {-1, 0}, {0, -1}, {1, -1}};

  CellId next = config.first_cell_id;
  for (const auto &qr : ring)
    {
      const Point site = axial (qr[0], qr[1]);
      if (config.sectorized)
        {
          for (double az : {30.0, 150.0, 270.0})
            {
              layout.cells.push_back (Cell{next++, site, az, config.tx_power_dbm});
            }
        }
      else
        {
          layout.cells.push_back (
            Cell{next++, site, std::nullopt, config.tx_power_dbm});
        }
    }

  if (config.wrap_around)
    {
      // Translations that tile the plane with copies of the 7-site cluster.
      const int shifts[6][2] = {{2, 1},  {-1, 3}, {-3, 2},
                                {-2, -1}, {1, -3}, {3, -2}};
      for (const auto &s : shifts)
        {
          layout.site_images.push_back (axial (s[0], s[1]));
        }
    }

  derive_neighbors (layout);
  layout.validate ();
  return layout;
}

} // namespace sleepcell
