#include "sleepcell/radio.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "sleepcell/error.hpp"

namespace sleepcell {

std::size_t
GridSpec::pixel_of (Point p) const
{
  auto clamp_axis = [this] (double v, double o, std::size_t n) {
    const double f = std::floor ((v - o) / resolution);
    if (!(f >= 0.0))
      {
        return std::size_t{0};
      }
    return std::min (static_cast<std::size_t> (f), n - 1);
  };
  return clamp_axis (p.y, origin.y, ny) * nx + clamp_axis (p.x, origin.x, nx);
}

GridSpec
grid_for (const Box &box, double resolution)
{
  if (!(resolution > 0.0))
    {
      throw ConfigError ("map resolution must be positive");
    }
  GridSpec g;
  g.origin = box.min;
  g.resolution = resolution;
  g.nx = static_cast<std::size_t> (std::ceil (box.width () / resolution - 1e-9));
  g.ny = static_cast<std::size_t> (std::ceil (box.height () / resolution - 1e-9));
  g.nx = std::max<std::size_t> (g.nx, 1);
  g.ny = std::max<std::size_t> (g.ny, 1);
  return g;
}

ShadowingField
ShadowingField::zero (const NetworkLayout &layout, double resolution)
{
  ShadowingField f;
  f.grid = grid_for (layout.bounds, resolution);
  f.fields.assign (1, std::vector<double> (f.grid.pixels (), 0.0));
  f.field_of_cell.assign (layout.size (), 0);
  return f;
}

namespace {

// Separable Gaussian blur with mirrored edges.
void
blur (std::vector<double> &data, std::size_t nx, std::size_t ny, double std_px)
{
  if (std_px <= 0.0)
    {
      return;
    }
  const int radius = static_cast<int> (std::ceil (3.0 * std_px));
  std::vector<double> kernel (2 * radius + 1);
  for (int i = -radius; i <= radius; ++i)
    {
      kernel[i + radius] = std::exp (-0.5 * (i * i) / (std_px * std_px));
    }

  auto mirror = [] (long i, long n) {
    if (n == 1)
      {
        return 0L;
      }
    while (i < 0 || i >= n)
      {
        i = i < 0 ? -i - 1 : 2 * n - i - 1;
      }
    return i;
  };

  std::vector<double> tmp (data.size ());
  for (std::size_t y = 0; y < ny; ++y)
    {
      for (std::size_t x = 0; x < nx; ++x)
        {
          double acc = 0.0;
          for (int k = -radius; k <= radius; ++k)
            {
              const long xx = mirror (static_cast<long> (x) + k,
                                      static_cast<long> (nx));
              acc += kernel[k + radius] * data[y * nx + xx];
            }
          tmp[y * nx + x] = acc;
        }
    }
  for (std::size_t y = 0; y < ny; ++y)
    {
      for (std::size_t x = 0; x < nx; ++x)
        {
          double acc = 0.0;
          for (int k = -radius; k <= radius; ++k)
            {
              const long yy = mirror (static_cast<long> (y) + k,
                                      static_cast<long> (ny));
              acc += kernel[k + radius] * tmp[yy * nx + x];
            }
          data[y * nx + x] = acc;
        }
    }
}

void
standardize (std::vector<double> &data, double sigma)
{
  const double n = static_cast<double> (data.size ());
  double mean = 0.0;
  for (double v : data)
    {
      mean += v;
    }
  mean /= n;
  double ss = 0.0;
  for (double v : data)
    {
      ss += (v - mean) * (v - mean);
    }
  const double sd = data.size () > 1 ? std::sqrt (ss / (n - 1.0)) : 0.0;
  for (double &v : data)
    {
      v = sd > 0.0 ? (v - mean) / sd * sigma : 0.0;
    }
}

} // namespace

ShadowingField
generate_shadowing (const NetworkLayout &layout, const ShadowingConfig &config,
                    std::uint64_t seed)
{
  if (!(config.sigma_db >= 0.0) || !(config.decorrelation_m >= 0.0))
    {
      throw ConfigError ("shadowing sigma and decorrelation must be >= 0");
    }
  if (layout.cells.empty ())
    {
      throw ConfigError ("layout has no cells");
    }

  ShadowingField f;
  f.grid = grid_for (layout.bounds, config.resolution_m);
  f.sigma_db = config.sigma_db;
  f.seed = seed;

  // One field per site (co-sited sectors share it) or one per cell.
  f.field_of_cell.resize (layout.size ());
  std::vector<Point> owners;
  for (std::size_t c = 0; c < layout.size (); ++c)
    {
      const Point site = layout.cells[c].site;
      auto it = owners.end ();
      if (config.per_site)
        {
          it = std::find (owners.begin (), owners.end (), site);
        }
      if (it == owners.end ())
        {
          f.field_of_cell[c] = owners.size ();
          owners.push_back (site);
        }
      else
        {
          f.field_of_cell[c] = static_cast<std::size_t> (it - owners.begin ());
        }
    }

  std::mt19937_64 rng (seed);
  std::normal_distribution<double> gauss (0.0, 1.0);
  // Gaussian smoothing with std s gives correlation exp(-d^2 / 4s^2), which
  // falls to 1/e at d = 2s.
  const double std_px = 0.5 * config.decorrelation_m / config.resolution_m;
  f.fields.resize (owners.size ());
  for (auto &field : f.fields)
    {
      field.resize (f.grid.pixels ());
      for (double &v : field)
        {
          v = gauss (rng);
        }
      blur (field, f.grid.nx, f.grid.ny, std_px);
      standardize (field, config.sigma_db);
    }
  return f;
}

RadioMap
build_radio_map (const NetworkLayout &layout, const ShadowingField &shadowing)
{
  if (layout.cells.empty ())
    {
      throw ConfigError ("layout has no cells");
    }
  if (shadowing.field_of_cell.size () != layout.size ())
    {
      throw ConfigError ("shadowing does not cover every cell");
    }
  const GridSpec expected = grid_for (layout.bounds, shadowing.grid.resolution);
  if (!(expected == shadowing.grid))
    {
      throw ConfigError ("layout and shadowing cover different areas");
    }

  RadioMap radio;
  radio.grid = shadowing.grid;
  radio.cell_count = layout.size ();
  radio.power_dbm.resize (radio.grid.pixels () * radio.cell_count);
  radio.total_power_dbm.resize (radio.grid.pixels ());
  for (std::size_t iy = 0; iy < radio.grid.ny; ++iy)
    {
      for (std::size_t ix = 0; ix < radio.grid.nx; ++ix)
        {
          const std::size_t px = iy * radio.grid.nx + ix;
          const Point p = radio.grid.center (ix, iy);
          double total_mw = 0.0;
          for (std::size_t c = 0; c < radio.cell_count; ++c)
            {
              const double v = cell_power_dbm (layout, c, p) + shadowing.at (c, px);
              radio.power_dbm[px * radio.cell_count + c] = v;
              total_mw += std::pow (10.0, v / 10.0);
            }
          radio.total_power_dbm[px] = 10.0 * std::log10 (total_mw);
        }
    }
  return radio;
}

DominanceMap
dominance_from_radio (const NetworkLayout &layout, const RadioMap &radio)
{
  DominanceMap map;
  map.grid = radio.grid;
  map.cells.resize (radio.grid.pixels ());
  for (std::size_t px = 0; px < radio.grid.pixels (); ++px)
    {
      std::size_t arg = 0;
      for (std::size_t c = 1; c < radio.cell_count; ++c)
        {
          if (radio.power (px, c) > radio.power (px, arg))
            {
              arg = c;
            }
        }
      map.cells[px] = layout.cells[arg].id;
    }
  return map;
}

DominanceMap
build_dominance_map (const NetworkLayout &layout,
                     const ShadowingField &shadowing)
{
  return dominance_from_radio (layout, build_radio_map (layout, shadowing));
}

double
DominanceMap::area_fraction (CellId id) const
{
  if (cells.empty ())
    {
      return 0.0;
    }
  const auto n = std::count (cells.begin (), cells.end (), id);
  return static_cast<double> (n) / static_cast<double> (cells.size ());
}

void
write_dominance_csv (const std::filesystem::path &path, const DominanceMap &map)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  out << "x_index,y_index,cell_id\n";
  for (std::size_t iy = 0; iy < map.grid.ny; ++iy)
    {
      for (std::size_t ix = 0; ix < map.grid.nx; ++ix)
        {
          out << ix << ',' << iy << ',' << map.at (ix, iy) << '\n';
        }
    }
  if (!out)
    {
      throw DataError ("write failed for " + path.string ());
    }
}

DominanceMap
read_dominance_csv (const std::filesystem::path &path, const GridSpec &grid)
{
  std::ifstream in (path, std::ios::binary);
  if (!in)
    {
      throw DataError ("cannot open " + path.string ());
    }
  DominanceMap map;
  map.grid = grid;
  map.cells.assign (grid.pixels (), 0);
  std::vector<char> seen (grid.pixels (), 0);

  std::string line;
  std::getline (in, line);
  if (line.rfind ("x_index,y_index,cell_id", 0) != 0)
    {
      throw DataError (path.string () + ": unexpected dominance map header");
    }
  std::size_t number = 1;
  while (std::getline (in, line))
    {
      ++number;
      if (line.empty () || line == "\r")
        {
          continue;
        }
      std::istringstream row (line);
      long ix = -1, iy = -1, cell = 0;
      char c1 = 0, c2 = 0;
      if (!(row >> ix >> c1 >> iy >> c2 >> cell) || c1 != ',' || c2 != ','
          || ix < 0 || iy < 0 || static_cast<std::size_t> (ix) >= grid.nx
          || static_cast<std::size_t> (iy) >= grid.ny)
        {
          throw DataError (path.string () + ": bad dominance row at line "
                           + std::to_string (number));
        }
      const std::size_t px = static_cast<std::size_t> (iy) * grid.nx
                             + static_cast<std::size_t> (ix);
      map.cells[px] = static_cast<CellId> (cell);
      seen[px] = 1;
    }
  if (std::find (seen.begin (), seen.end (), 0) != seen.end ())
    {
      throw DataError (path.string () + ": dominance map is incomplete");
    }
  return map;
}

} // namespace sleepcell
