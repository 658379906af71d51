#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "sleepcell/layout.hpp"
#include "sleepcell/radio.hpp"

namespace sleepcell::testing {

/// Cells 1..n in a row, 10 m pixels, cell i owning pixel i-1 of a 1-row map.
struct StripNetwork
{
  NetworkLayout layout;
  DominanceMap dominance;

  explicit StripNetwork (std::size_t n)
  {
    for (std::size_t i = 0; i < n; ++i)
      {
        Cell c;
        c.id = static_cast<CellId> (i + 1);
        c.site = Point{10.0 * static_cast<double> (i) + 5.0, 5.0};
        layout.cells.push_back (c);
      }
    layout.bounds = Box{Point{0.0, 0.0}, Point{10.0 * static_cast<double> (n), 10.0}};
    layout.neighbors.resize (n);
    for (std::size_t i = 0; i + 1 < n; ++i)
      {
        layout.neighbors[i].push_back (static_cast<CellId> (i + 2));
        layout.neighbors[i + 1].push_back (static_cast<CellId> (i + 1));
      }
    for (auto &nb : layout.neighbors)
      {
        std::sort (nb.begin (), nb.end ());
      }
    dominance.grid = GridSpec{Point{0.0, 0.0}, 10.0, n, 1};
    for (std::size_t i = 0; i < n; ++i)
      {
        dominance.cells.push_back (static_cast<CellId> (i + 1));
      }
  }

  /// A point inside the dominance area of `cell`.
  static Point in (CellId cell) { return Point{10.0 * (cell - 1) + 5.0, 5.0}; }
};

/// Unique scratch directory removed on destruction.
class TempDir
{
public:
  TempDir ()
  {
    static std::mt19937_64 rng (std::random_device{} ());
    m_path = std::filesystem::temp_directory_path ()
             / ("sleepcell_test_" + std::to_string (rng ()));
    std::filesystem::create_directories (m_path);
  }
  ~TempDir ()
  {
    std::error_code ec;
    std::filesystem::remove_all (m_path, ec);
  }
  TempDir (const TempDir &) = delete;
  TempDir &operator= (const TempDir &) = delete;

  const std::filesystem::path &path () const { return m_path; }
  std::filesystem::path operator/ (const std::string &name) const { return m_path / name; }

private:
  std::filesystem::path m_path;
};

inline std::string
slurp (const std::filesystem::path &path)
{
  std::ifstream in (path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf ();
  return s.str ();
}

} // namespace sleepcell::testing
