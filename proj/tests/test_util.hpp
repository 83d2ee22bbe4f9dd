#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

#include "pacok/grid.hpp"

namespace pacok::testutil {

inline GridField random_field(const PeriodicGrid& grid, std::mt19937_64& rng, double lo = 0.0,
                              double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  GridField a(grid);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = dist(rng);
  return a;
}

inline Eigen::VectorXd to_vector(const GridField& a) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i];
  return v;
}

inline GridField to_field(const PeriodicGrid& grid, const Eigen::VectorXd& v) {
  GridField a(grid);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = v(static_cast<Eigen::Index>(i));
  return a;
}

// Explicit periodic 3/5-point Laplacian, assembled entry by entry.
inline Eigen::MatrixXd dense_laplacian(const PeriodicGrid& g) {
  const auto n = static_cast<Eigen::Index>(g.num_cells());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  const long n1 = g.size(0);
  const long n2 = g.dim() == 2 ? g.size(1) : 1;
  const double c1 = 1.0 / (g.spacing(0) * g.spacing(0));
  for (long i = 0; i < n1; ++i) {
    for (long j = 0; j < n2; ++j) {
      const auto row = static_cast<Eigen::Index>(g.wrap(i, j));
      A(row, static_cast<Eigen::Index>(g.wrap(i - 1, j))) += c1;
      A(row, static_cast<Eigen::Index>(g.wrap(i + 1, j))) += c1;
      A(row, row) -= 2.0 * c1;
      if (g.dim() == 2) {
        const double c2 = 1.0 / (g.spacing(1) * g.spacing(1));
        A(row, static_cast<Eigen::Index>(g.wrap(i, j - 1))) += c2;
        A(row, static_cast<Eigen::Index>(g.wrap(i, j + 1))) += c2;
        A(row, row) -= 2.0 * c2;
      }
    }
  }
  return A;
}

// Moore-Penrose inverse of -Delta_h via a symmetric eigendecomposition.
inline Eigen::MatrixXd dense_inv_neg_laplacian(const PeriodicGrid& g) {
  const Eigen::MatrixXd neg = -dense_laplacian(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(neg);
  const Eigen::VectorXd& ev = es.eigenvalues();
  Eigen::VectorXd inv(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) inv(i) = std::abs(ev(i)) > 1e-9 ? 1.0 / ev(i) : 0.0;
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace pacok::testutil
