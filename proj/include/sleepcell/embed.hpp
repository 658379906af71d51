#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>

#include <Eigen/Dense>

namespace sleepcell {

/// Eigen-decomposition of the training covariance.
struct EigenBasis
{
  Eigen::VectorXd mean;
  /// Descending.
  Eigen::VectorXd eigenvalues;
  /// Column i belongs to eigenvalues(i).
  Eigen::MatrixXd eigenvectors;

  std::size_t dimension () const { return static_cast<std::size_t> (mean.size ()); }
};

inline constexpr double kEigenTolerance = 1e-9;

/// Sample covariance of the mean-centred rows (divisor r - 1).
Eigen::MatrixXd covariance (const Eigen::MatrixXd &x, const Eigen::VectorXd &mean);

/// Throws DataError for fewer than two rows or columns.
EigenBasis fit_basis (const Eigen::MatrixXd &train);

/// SORTE over a descending spectrum. Empty when no split has a finite ratio.
/// Throws DataError for fewer than four eigenvalues.
std::optional<std::size_t> sorte (std::span<const double> descending);

/// SORTE with a fallback for degenerate spectra.
std::size_t sorte_select (const Eigen::VectorXd &descending, std::size_t fallback = 6);

struct Embedding
{
  /// rows x d, minor components ordered from the smallest eigenvalue up.
  Eigen::MatrixXd coordinates;
  std::size_t d = 0;
};

/// Projects onto the `d` smallest-eigenvalue directions of `basis`, using the
/// basis mean for centring.
Embedding project_minor (const EigenBasis &basis, const Eigen::MatrixXd &x,
                         std::size_t d);

void write_spectrum_csv (const std::filesystem::path &path,
                         const EigenBasis &basis);

} // namespace sleepcell
