#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pacok/fourier.hpp"
#include "pacok/spectral.hpp"
#include "test_util.hpp"

using namespace pacok;
using pacok::testutil::random_field;

namespace {

GridField cosine_mode(const PeriodicGrid& g, int j1, int j2) {
  GridField a(g);
  const long n2 = g.dim() == 2 ? g.size(1) : 1;
  for (long i = 0; i < g.size(0); ++i) {
    for (long k = 0; k < n2; ++k) {
      double v = std::cos(j1 * std::numbers::pi * g.coordinate(0, i) / g.half_extent(0));
      if (g.dim() == 2) v *= std::cos(j2 * std::numbers::pi * g.coordinate(1, k) / g.half_extent(1));
      a[g.wrap(i, k)] = v;
    }
  }
  return a;
}

double mode_eigenvalue(const PeriodicGrid& g, int j1, int j2) {
  const auto term = [](double h, double x, int j) {
    const double s = std::sin(j * std::numbers::pi * h / (2.0 * x));
    return 4.0 / (h * h) * s * s;
  };
  double lam = term(g.spacing(0), g.half_extent(0), j1);
  if (g.dim() == 2) lam += term(g.spacing(1), g.half_extent(1), j2);
  return lam;
}

}  // namespace

TEST(Fourier, RoundTrip) {
  for (const PeriodicGrid& g : {PeriodicGrid::line(16), PeriodicGrid::square(8),
                                PeriodicGrid({8, 12}, {1.0, 2.0})}) {
    std::mt19937_64 rng(1);
    const GridField a = random_field(g, rng, -1, 1);
    FourierTransform t(g);
    std::vector<std::complex<double>> spec(t.spectrum_size());
    GridField back(g);
    t.forward(a.values(), spec);
    t.inverse(spec, back.values());
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(back[i], a[i], 1e-14);
  }
}

TEST(Fourier, ModeNumbersAreSigned) {
  FourierTransform t(PeriodicGrid::square(8));
  EXPECT_EQ(t.spectrum_size(), 8u * 5u);
  EXPECT_EQ(t.mode(0), (std::array<int, 2>{0, 0}));
  EXPECT_EQ(t.mode(4), (std::array<int, 2>{0, 4}));
  EXPECT_EQ(t.mode(5 * 7 + 1), (std::array<int, 2>{-1, 1}));
  FourierTransform l(PeriodicGrid::line(8));
  EXPECT_EQ(l.spectrum_size(), 5u);
  EXPECT_EQ(l.mode(3), (std::array<int, 2>{3, 0}));
}

TEST(Laplacian, AnnihilatesConstants) {
  const PeriodicGrid g = PeriodicGrid::square(16);
  const GridField out = apply_laplacian(GridField(g, 3.7));
  EXPECT_LE(norm_linf_h(out), 1e-12);
}

TEST(Laplacian, CosineModesAreEigenfields) {
  for (const PeriodicGrid& g : {PeriodicGrid::line(64, 1.5), PeriodicGrid::square(32)}) {
    const int n2 = g.dim() == 2 ? g.size(1) / 2 : 0;
    for (int j1 = 0; j1 <= g.size(0) / 2; j1 += 3) {
      for (int j2 = 0; j2 <= n2; j2 += 5) {
        const GridField a = cosine_mode(g, j1, j2);
        const GridField la = apply_laplacian(a);
        const double lam = mode_eigenvalue(g, j1, j2);
        for (std::size_t i = 0; i < a.size(); ++i) {
          EXPECT_NEAR(la[i], -lam * a[i], 1e-12 * std::max(1.0, lam));
        }
      }
    }
  }
}

TEST(Laplacian, MatchesDenseMatrix) {
  const PeriodicGrid g({8, 8}, {1.0, 0.5});
  const Eigen::MatrixXd A = testutil::dense_laplacian(g);
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 5; ++trial) {
    const GridField a = random_field(g, rng, -1, 1);
    const Eigen::VectorXd oracle = A * testutil::to_vector(a);
    const GridField out = apply_laplacian(a);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(out[i], oracle(i), 1e-10);
  }
}

TEST(Laplacian, ZeroSumOutput) {
  const PeriodicGrid g = PeriodicGrid::square(64);
  std::mt19937_64 rng(9);
  const GridField a = random_field(g, rng, -1, 1);
  const GridField out = apply_laplacian(a);
  EXPECT_LE(std::abs(compensated_sum(out.values())) * g.cell_measure(), 1e-12 * norm_linf_h(a));
}

TEST(InverseLaplacian, Examples) {
  const PeriodicGrid g = PeriodicGrid::square(16);
  EXPECT_LE(norm_linf_h(apply_inv_neg_laplacian(GridField(g, 2.0))), 1e-14);

  const GridField e = cosine_mode(g, 3, 1);
  const double lam = mode_eigenvalue(g, 3, 1);
  const GridField u = apply_inv_neg_laplacian(e);
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(u[i], e[i] / lam, 1e-13);
}

TEST(InverseLaplacian, MatchesPseudoInverse) {
  const PeriodicGrid g = PeriodicGrid::square(8);
  const Eigen::MatrixXd P = testutil::dense_inv_neg_laplacian(g);
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    GridField a = random_field(g, rng, -1, 1);
    const double m = mean_h(a);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= m;
    const Eigen::VectorXd oracle = P * testutil::to_vector(a);
    const GridField u = apply_inv_neg_laplacian(a);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(u[i], oracle(i), 1e-10);
    EXPECT_NEAR(mean_h(u), 0.0, 1e-14);
  }
}

TEST(InverseLaplacian, RoundTripUpTo128) {
  std::mt19937_64 rng(13);
  for (int n : {8, 32, 128}) {
    const PeriodicGrid g = PeriodicGrid::square(n);
    const GridField a = random_field(g, rng, -1, 1);
    const GridField back = apply_laplacian(apply_inv_neg_laplacian(a));
    const double m = mean_h(a);
    double err = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      err = std::max(err, std::abs(back[i] + (a[i] - m)));
      scale = std::max(scale, std::abs(a[i] - m));
    }
    EXPECT_LE(err, 1e-10 * scale) << "n=" << n;
  }
}

TEST(LongRange, HelmholtzConstantsAndDenseSolve) {
  const PeriodicGrid g = PeriodicGrid::square(8);
  const LongRangeOp op = LongRangeOp::helmholtz(0.3);
  const GridField c = apply_long_range(op, GridField(g, 0.25));
  for (double v : c.values()) EXPECT_NEAR(v, 0.25, 1e-15);

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(64, 64);
  const Eigen::MatrixXd A = I - 0.09 * testutil::dense_laplacian(g);
  std::mt19937_64 rng(14);
  const GridField a = random_field(g, rng, -1, 1);
  const Eigen::VectorXd oracle = A.lu().solve(testutil::to_vector(a));
  const GridField u = apply_long_range(op, a);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(u[i], oracle(i), 1e-10);
}

TEST(LongRange, GarnetSymbol) {
  EXPECT_DOUBLE_EQ(garnet_symbol(0.2, 0.0), 1.0);
  const double k = 7.0;
  EXPECT_NEAR(garnet_symbol(0.2, k), (1.0 - std::exp(-0.2 * k)) / (0.2 * k), 1e-15);

  const PeriodicGrid g({8, 16}, {1.0, 2.0});
  FourierTransform t(g);
  const std::vector<double> sym = operator_symbol(LongRangeOp::garnet_film(0.5), g);
  for (std::size_t i = 0; i < sym.size(); ++i) {
    const auto [m1, m2] = t.mode(i);
    const double kk = std::hypot(std::numbers::pi * m1 / 1.0, std::numbers::pi * m2 / 2.0);
    const double expect = kk == 0.0 ? 1.0 : (1.0 - std::exp(-0.5 * kk)) / (0.5 * kk);
    EXPECT_NEAR(sym[i], expect, 1e-15);
  }
}

TEST(LongRange, CustomTable) {
  const PeriodicGrid g = PeriodicGrid::line(8);
  SymbolTable identity;
  for (int m = 0; m < 8; ++m) identity[{m, 0}] = 1.0;
  const LongRangeOp id = LongRangeOp::custom(identity);
  EXPECT_EQ(estimate_linf_norm(id, g), 1.0);

  SymbolTable signed_keys;
  for (int m = -3; m <= 4; ++m) signed_keys[{m, 0}] = 1.0 / (1.0 + m * m);
  std::mt19937_64 rng(15);
  const GridField a = random_field(g, rng);
  SymbolTable unsigned_keys;
  for (int m = 0; m < 8; ++m) {
    const int s = m > 4 ? m - 8 : m;
    unsigned_keys[{m, 0}] = 1.0 / (1.0 + s * s);
  }
  const GridField u = apply_long_range(LongRangeOp::custom(signed_keys), a);
  const GridField v = apply_long_range(LongRangeOp::custom(unsigned_keys), a);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(u[i], v[i]);

  SymbolTable missing = identity;
  missing.erase({3, 0});
  missing.erase({5, 0});
  EXPECT_THROW(apply_long_range(LongRangeOp::custom(missing), a), ConfigError);
  SymbolTable odd = identity;
  odd[{3, 0}] = 2.0;
  EXPECT_THROW(apply_long_range(LongRangeOp::custom(odd), a), ConfigError);
  SymbolTable negative = identity;
  negative[{0, 0}] = -1.0;
  EXPECT_THROW(apply_long_range(LongRangeOp::custom(negative), a), ConfigError);
}

TEST(LongRange, NoneIsRejected) {
  EXPECT_ANY_THROW(apply_long_range(LongRangeOp::none(), GridField(PeriodicGrid::line(8))));
  EXPECT_EQ(estimate_linf_norm(LongRangeOp::none(), PeriodicGrid::line(8)), 0.0);
}

TEST(LongRange, LinearityAndPositivity) {
  const PeriodicGrid g = PeriodicGrid::square(16, 1.3);
  std::mt19937_64 rng(16);
  SymbolTable table;
  for (int m1 = 0; m1 < 16; ++m1)
    for (int m2 = 0; m2 < 16; ++m2) {
      const int s1 = m1 > 8 ? m1 - 16 : m1;
      const int s2 = m2 > 8 ? m2 - 16 : m2;
      table[{m1, m2}] = std::exp(-0.1 * (s1 * s1 + s2 * s2));
    }
  for (const LongRangeOp& op :
       {LongRangeOp::inverse_laplacian(), LongRangeOp::helmholtz(0.2), LongRangeOp::garnet_film(0.3),
        LongRangeOp::custom(table)}) {
    for (int trial = 0; trial < 10; ++trial) {
      const GridField a = random_field(g, rng, -1, 1);
      const GridField b = random_field(g, rng, -1, 1);
      GridField mix(g);
      for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 1.7 * a[i] - 0.4 * b[i];
      const GridField la = apply_long_range(op, a);
      const GridField lb = apply_long_range(op, b);
      const GridField lm = apply_long_range(op, mix);
      const double scale = norm_linf_h(lm) + 1.0;
      for (std::size_t i = 0; i < mix.size(); ++i) {
        EXPECT_NEAR(lm[i], 1.7 * la[i] - 0.4 * lb[i], 1e-12 * scale);
      }
      EXPECT_GE(inner_product_h(la, a), -1e-12);
    }
  }
}

TEST(OperatorNorm, InverseLaplacianMatchesDenseRowSums) {
  const PeriodicGrid g = PeriodicGrid::square(8);
  const Eigen::MatrixXd P = testutil::dense_inv_neg_laplacian(g);
  double oracle = 0.0;
  for (Eigen::Index i = 0; i < P.rows(); ++i) oracle = std::max(oracle, P.row(i).cwiseAbs().sum());
  EXPECT_NEAR(estimate_linf_norm(LongRangeOp::inverse_laplacian(), g), oracle, 1e-10);
}

TEST(OperatorNorm, ImpulseLocationDoesNotMatter) {
  const PeriodicGrid g = PeriodicGrid::square(16);
  const LongRangeOp op = LongRangeOp::helmholtz(0.15);
  const double base = estimate_linf_norm(op, g);
  for (std::size_t cell : {5u, 77u, 255u}) {
    GridField impulse(g);
    impulse[cell] = 1.0;
    const GridField r = apply_long_range(op, impulse);
    double s = 0.0;
    for (double v : r.values()) s += std::abs(v);
    EXPECT_NEAR(s, base, 1e-12);
  }
}
