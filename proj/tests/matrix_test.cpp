#include <gtest/gtest.h>

#include <atomic>
#include <mutex>
#include <random>

#include "masspcf/datagen.hpp"
#include "masspcf/matrix.hpp"
#include "oracles.hpp"

namespace mpcf {
namespace {

DenseMatrix<double> from_rows(std::vector<std::vector<double>> rows) {
  DenseMatrix<double> m(rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) {
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

const std::vector<Pcf64> X = oracle::guide_pcfs();

TEST(Pdist, GuideMatrixL1) {
  EXPECT_EQ(pdist(X), from_rows({{0, 34, 6, 12}, {34, 0, 34, 24}, {6, 34, 0, 10}, {12, 24, 10, 0}}));
}

TEST(Pdist, GuideMatrixP35) {
  const DenseMatrix<double> m = pdist(X, 3.5);
  EXPECT_NEAR(m(0, 1), 9.80058139, 1e-7);
  EXPECT_NEAR(m(1, 2), 10.10250875, 1e-7);
  EXPECT_NEAR(m(2, 3), 2.82601424, 1e-7);
  EXPECT_NEAR(m(0, 2), 2.49774585, 1e-7);
}

TEST(Pdist, SingletonAndErrors) {
  EXPECT_EQ(pdist(std::vector{X[0]}), from_rows({{0}}));
  EXPECT_THROW(pdist(std::vector<Pcf64>{}), Error);
  EXPECT_THROW(pdist(X, 0.5), Error);
}

TEST(Pdist, DivergentPairIsNamed) {
  std::vector<Pcf64> fs = X;
  fs.push_back(Pcf64{{0, 1}});
  try {
    pdist(fs);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivergentIntegral);
    ASSERT_TRUE(e.pair().has_value());
    EXPECT_EQ(e.pair()->j, 4u);
    EXPECT_NE(std::string(e.what()).find("pair ("), std::string::npos);
  }
}

TEST(L2Kernel, GuideMatrix) {
  EXPECT_EQ(l2_kernel(X), from_rows({{77, 53, 55, 38}, {53, 213, 31, 51}, {55, 31, 43, 26}, {38, 51, 26, 25}}));
  EXPECT_EQ(l2_kernel(std::vector<Pcf64>(2)), from_rows({{0, 0}, {0, 0}}));
}

TEST(L2Kernel, ScaledPartner) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 50; ++trial) {
    const Pcf64 f = oracle::random_pcf<double>(rng);
    const auto k = l2_kernel(std::vector{f, scale(f, 2.0)});
    EXPECT_EQ(k(0, 1), 2.0 * k(0, 0));
  }
}

TEST(Pairwise, AsymmetricFunctional) {
  CombinationIntegral first{[](double x, double) { return x; }};
  const auto m = pairwise(std::span<const Pcf64>(std::vector{X[0], X[2]}), first);
  EXPECT_EQ(m, from_rows({{19, 19}, {13, 13}}));
}

TEST(Pairwise, L1FunctionalReproducesPdist) {
  CombinationIntegral l1{[](double x, double y) { return std::abs(x - y); }};
  l1.symmetric = true;
  l1.zero_diagonal = true;
  EXPECT_EQ(pairwise(std::span<const Pcf64>(X), l1), pdist(X));
}

TEST(Pairwise, OracleEquivalence) {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const auto fs = oracle::random_collection<double>(rng, 1 + trial % 8);
    const auto d = pdist(fs, 2.0);
    const auto k = l2_kernel(fs);
    for (std::size_t i = 0; i < fs.size(); ++i) {
      EXPECT_EQ(d(i, i), 0.0);
      for (std::size_t j = 0; j < fs.size(); ++j) {
        if (i < j) {
          EXPECT_EQ(d(i, j), lp_distance(fs[i], fs[j], 2.0));
          EXPECT_EQ(k(i, j), l2_inner_product(fs[i], fs[j]));
        }
        EXPECT_EQ(d(i, j), d(j, i));
        EXPECT_EQ(k(i, j), k(j, i));
      }
      EXPECT_EQ(k(i, i), l2_inner_product(fs[i], fs[i]));
    }
  }
}

TEST(Pairwise, WorkerCountInvariance) {
  const auto fs = synthetic_benchmark<double>(60, RngSpec{3});
  PairwiseOptions serial{1, 0, false};
  const auto reference = pdist(fs, 1.0, serial);
  for (unsigned w : {2u, 8u}) {
    for (std::size_t height : {0u, 1u, 7u}) {
      PairwiseOptions opt{w, height, false};
      EXPECT_EQ(pdist(fs, 1.0, opt), reference) << w << " workers, height " << height;
    }
  }
  const auto fs32 = synthetic_benchmark<float>(40, RngSpec{3});
  EXPECT_EQ(l2_kernel(fs32, {1, 0, false}), l2_kernel(fs32, {8, 3, false}));
}

TEST(PairwiseJob, WorkConservation) {
  std::mt19937_64 rng(53);
  const auto fs = oracle::random_collection<double>(rng, 17);
  PairwiseJob<double> distances(fs, LpDistance{1.0}, {4, 2, false});
  distances.run();
  EXPECT_EQ(distances.integrals_computed(), 17u * 16u / 2u);
  PairwiseJob<double> gram(fs, L2Inner{}, {4, 2, false});
  gram.run();
  EXPECT_EQ(gram.integrals_computed(), 17u * 18u / 2u);
  PairwiseJob<double> full(fs, CombinationIntegral{[](double x, double y) { return x * y; }}, {4, 2, false});
  full.run();
  EXPECT_EQ(full.integrals_computed(), 17u * 17u);
}

TEST(PairwiseJob, ProgressSingleBlock) {
  PairwiseJob<double> job(X, LpDistance{1.0}, {1, 100, true});
  std::vector<double> seen;
  progress_subscribe(job, [&](double f) { seen.push_back(f); });
  job.run();
  ASSERT_EQ(job.block_count(), 1u);
  EXPECT_EQ(seen, std::vector<double>{1.0});
}

TEST(PairwiseJob, ProgressPerBlockMonotone) {
  std::mt19937_64 rng(54);
  const auto fs = oracle::random_collection<double>(rng, 10);
  for (unsigned workers : {1u, 3u}) {
    PairwiseJob<double> job(fs, LpDistance{1.0}, {workers, 1, false});
    std::mutex mu;
    std::vector<double> seen;
    job.subscribe([&](double f) {
      std::lock_guard lock(mu);
      seen.push_back(f);
    });
    job.run();
    EXPECT_EQ(job.block_count(), 10u);
    ASSERT_GE(seen.size(), 10u);
    EXPECT_TRUE(std::is_sorted(seen.begin(), seen.end()));
    EXPECT_EQ(seen.back(), 1.0);
    EXPECT_GE(seen.front(), 0.0);
  }
}

TEST(PairwiseJob, CancelDiscardsPartialResult) {
  const auto fs = synthetic_benchmark<double>(40, RngSpec{9});
  PairwiseJob<double> job(fs, LpDistance{1.0}, {2, 1, false});
  job.subscribe([&](double) { job.cancel(); });
  job.run();
  EXPECT_EQ(job.status(), JobStatus::Cancelled);
  EXPECT_LT(job.integrals_computed(), job.expected_integrals());
  try {
    job.get();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Cancelled);
  }
}

TEST(PairwiseJob, BackgroundStart) {
  PairwiseJob<double> job(X, L2Inner{});
  job.start();
  EXPECT_THROW(job.start(), Error);
  EXPECT_EQ(job.get(), l2_kernel(X));
  EXPECT_EQ(job.status(), JobStatus::Done);
}

TEST(PairwiseJob, FailedStatus) {
  std::vector<Pcf64> fs = X;
  fs.push_back(Pcf64{{0, 1}});
  PairwiseJob<double> job(fs, LpDistance{1.0});
  job.run();
  EXPECT_EQ(job.status(), JobStatus::Failed);
  EXPECT_THROW(job.get(), Error);
}

TEST(PairwiseJob, SerialFallbackForTinyInputs) {
  PairwiseJob<double> job(X, LpDistance{1.0}, {8, 0, true});
  EXPECT_EQ(job.workers(), 1u);
  PairwiseJob<double> forced(X, LpDistance{1.0}, {8, 0, false});
  EXPECT_EQ(forced.workers(), 8u);
}

TEST(BlockHeight, Defaults) {
  EXPECT_EQ(default_block_height(1, 1, 8), 1u);
  EXPECT_EQ(default_block_height(100, 1, 8), 13u);
  EXPECT_EQ(default_block_height(100, 4, 8), 4u);
  // 64 MiB cap: rows of 1e6 doubles -> at most 8 rows per block.
  EXPECT_EQ(default_block_height(1'000'000, 1, 8), 8u);
}

} // namespace
} // namespace mpcf
