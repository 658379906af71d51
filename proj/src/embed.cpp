#include "sleepcell/embed.hpp"

#include <cmath>
#include <fstream>
#include <vector>

#include "sleepcell/error.hpp"

namespace sleepcell {

Eigen::MatrixXd
covariance (const Eigen::MatrixXd &x, const Eigen::VectorXd &mean)
{
  if (x.rows () < 2)
    {
      throw DataError ("covariance needs at least 2 rows");
    }
  const Eigen::MatrixXd centred = x.rowwise () - mean.transpose ();
  return (centred.transpose () * centred) / static_cast<double> (x.rows () - 1);
}

EigenBasis
fit_basis (const Eigen::MatrixXd &train)
{
  if (train.rows () < 2)
    {
      throw DataError ("insufficient training data: need at least 2 rows, got "
                       + std::to_string (train.rows ()));
    }
  if (train.cols () < 2)
    {
      throw DataError ("insufficient training data: need at least 2 columns, got "
                       + std::to_string (train.cols ()));
    }
  EigenBasis basis;
  basis.mean = train.colwise ().mean ().transpose ();
  const Eigen::MatrixXd cov = covariance (train, basis.mean);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver (cov);
  if (solver.info () != Eigen::Success)
    {
      throw DataError ("eigendecomposition did not converge");
    }
  // Eigen returns ascending order.
  const Eigen::Index n = cov.rows ();
  basis.eigenvalues.resize (n);
  basis.eigenvectors.resize (n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    {
      double v = solver.eigenvalues () (n - 1 - i);
      if (v < 0.0 && v >= -kEigenTolerance)
        {
          v = 0.0;
        }
      basis.eigenvalues (i) = v;
      basis.eigenvectors.col (i) = solver.eigenvectors ().col (n - 1 - i);
    }
  return basis;
}

std::optional<std::size_t>
sorte (std::span<const double> descending)
{
  const std::size_t p = descending.size ();
  if (p < 4)
    {
      throw DataError ("SORTE needs at least 4 eigenvalues; configure a fixed "
                       "component count instead");
    }
  std::vector<double> gaps (p - 1);
  for (std::size_t i = 0; i + 1 < p; ++i)
    {
      gaps[i] = descending[i] - descending[i + 1];
    }
  // var_from(k): population variance of gaps[k..], zero-based.
  auto var_from = [&] (std::size_t k) {
    const double count = static_cast<double> (gaps.size () - k);
    double mean = 0.0;
    for (std::size_t i = k; i < gaps.size (); ++i)
      {
        mean += gaps[i];
      }
    mean /= count;
    double acc = 0.0;
    for (std::size_t i = k; i < gaps.size (); ++i)
      {
        acc += (gaps[i] - mean) * (gaps[i] - mean);
      }
    return acc / count;
  };

  // Splits with Var_k == 0 have no finite ratio and are skipped.
  std::optional<std::size_t> best;
  double best_ratio = 0.0;
  for (std::size_t k = 1; k + 3 <= p; ++k)
    {
      const double vk = var_from (k - 1);
      if (!(vk > 0.0))
        {
          continue;
        }
      const double ratio = var_from (k) / vk;
      if (!best || ratio < best_ratio)
        {
          best = k;
          best_ratio = ratio;
        }
    }
  return best;
}

std::size_t
sorte_select (const Eigen::VectorXd &descending, std::size_t fallback)
{
  const auto d = sorte (std::span<const double> (descending.data (),
                                                 static_cast<std::size_t> (descending.size ())));
  return d.value_or (fallback);
}

Embedding
project_minor (const EigenBasis &basis, const Eigen::MatrixXd &x, std::size_t d)
{
  const std::size_t dim = basis.dimension ();
  if (static_cast<std::size_t> (x.cols ()) != dim)
    {
      throw DataError ("projection input has " + std::to_string (x.cols ())
                       + " columns, basis has " + std::to_string (dim));
    }
  if (d < 1 || d > dim)
    {
      throw ConfigError ("component count must be in [1, " + std::to_string (dim) + "]");
    }
  Eigen::MatrixXd minor (dim, d);
  for (std::size_t j = 0; j < d; ++j)
    {
      minor.col (static_cast<Eigen::Index> (j))
        = basis.eigenvectors.col (static_cast<Eigen::Index> (dim - 1 - j));
    }
  Embedding e;
  e.d = d;
  e.coordinates = (x.rowwise () - basis.mean.transpose ()) * minor;
  return e;
}

void
write_spectrum_csv (const std::filesystem::path &path, const EigenBasis &basis)
{
  std::ofstream out (path, std::ios::binary);
  if (!out)
    {
      throw DataError ("cannot write " + path.string ());
    }
  out.precision (17);
  out << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < basis.eigenvalues.size (); ++i)
    {
      out << i << ',' << basis.eigenvalues (i) << '\n';
    }
}

} // namespace sleepcell
