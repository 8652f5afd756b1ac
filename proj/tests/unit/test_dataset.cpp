#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>

#include "plsga/dataset.hpp"
#include "plsga/error.hpp"

namespace plsga {
namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("plsga_test_" + name);
  std::ofstream(path) << content;
  return path;
}

const char* kSmallCsv =
    "id,v1,v2,y\n"
    "a,1.0,2.0,3.0\n"
    "b,2.0,1.5,4.0\n"
    "c,3.0,0.5,5.5\n"
    "d,4.0,2.5,7.0\n"
    "e,5.0,3.0,9.0\n";

TEST(LoadCsv, ReadsPredictorsAndResponse) {
  const auto path = write_temp("small.csv", kSmallCsv);
  const Dataset d = load_csv(path, "y", std::string("id"));
  EXPECT_EQ(d.n_observations(), 5u);
  EXPECT_EQ(d.n_variables(), 2u);
  EXPECT_EQ(d.variable_names(), (std::vector<std::string>{"v1", "v2"}));
  EXPECT_EQ(d.observation_ids().front(), "a");
  EXPECT_DOUBLE_EQ(d.x()(2, 1), 0.5);
  EXPECT_DOUBLE_EQ(d.y()(4), 9.0);
}

TEST(LoadCsv, MissingResponseColumnIsNamed) {
  const auto path = write_temp("small2.csv", kSmallCsv);
  try {
    load_csv(path, "z", std::string("id"));
    FAIL() << "expected ColumnNotFoundError";
  } catch (const ColumnNotFoundError& e) {
    EXPECT_EQ(e.column(), "z");
  }
}

TEST(LoadCsv, MissingValueReportsRowAndColumn) {
  const auto path = write_temp("na.csv",
                               "id,v1,v2,y\n"
                               "a,1,2,3\n"
                               "b,2,NA,4\n"
                               "c,3,1,5\n"
                               "d,4,2,7\n");
  try {
    load_csv(path, "y", std::string("id"));
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 3u);
    EXPECT_EQ(e.column(), 3u);
  }
}

TEST(LoadCsv, TooFewObservations) {
  const auto path = write_temp("tiny.csv", "v1,y\n1,2\n2,3\n3,4\n");
  EXPECT_THROW(load_csv(path, "y"), TooFewObservationsError);
}

TEST(LoadCsv, WithoutIdColumnAllOtherColumnsArePredictors) {
  const auto path = write_temp("noid.csv", "v1,v2,y\n1,2,3\n2,1,4\n3,0,5\n4,2,7\n");
  const Dataset d = load_csv(path, "y");
  EXPECT_EQ(d.n_variables(), 2u);
  EXPECT_EQ(d.observation_ids().back(), "4");
}

TEST(Dataset, RejectsDuplicateNames) {
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(4, 2);
  Eigen::VectorXd y = Eigen::VectorXd::Ones(4);
  EXPECT_THROW(Dataset(x, y, {"a", "a"}, {"1", "2", "3", "4"}), DataError);
}

TEST(MakeSegments, DivisibleSizes) {
  RandomStream rng(1);
  const CvSegmentation seg = make_segments(10, 5, rng);
  ASSERT_EQ(seg.size(), 5u);
  for (const auto& s : seg.segments) EXPECT_EQ(s.size(), 2u);
}

TEST(MakeSegments, BalancedSizes) {
  RandomStream rng(2);
  const CvSegmentation seg = make_segments(10, 4, rng);
  std::multiset<std::size_t> sizes;
  for (const auto& s : seg.segments) sizes.insert(s.size());
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{2, 2, 3, 3}));
}

TEST(MakeSegments, DeterministicPerSeed) {
  RandomStream a(77);
  RandomStream b(77);
  EXPECT_EQ(make_segments(209, 10, a).segments, make_segments(209, 10, b).segments);
}

TEST(MakeSegments, InvalidCounts) {
  RandomStream rng(3);
  EXPECT_THROW(make_segments(5, 6, rng), SegmentationError);
  EXPECT_THROW(make_segments(5, 1, rng), SegmentationError);
}

TEST(MakeSegments, PartitionPropertyOverManyShapes) {
  RandomStream rng(4);
  for (Index n = 2; n <= 40; ++n) {
    for (Index k = 2; k <= n; k += 3) {
      const CvSegmentation seg = make_segments(n, k, rng);
      std::vector<Index> all;
      std::size_t smallest = n;
      std::size_t largest = 0;
      for (const auto& s : seg.segments) {
        all.insert(all.end(), s.begin(), s.end());
        smallest = std::min(smallest, s.size());
        largest = std::max(largest, s.size());
      }
      std::sort(all.begin(), all.end());
      std::vector<Index> expected(n);
      std::iota(expected.begin(), expected.end(), Index{0});
      ASSERT_EQ(all, expected);
      EXPECT_EQ(smallest, n / k);
      EXPECT_EQ(largest, (n + k - 1) / k);
    }
  }
}

TEST(MakeSegments, AssignmentIsUniformChiSquare) {
  // Index 0..n-1 lands in segment s with probability 1/K. 10,000 draws,
  // chi-square with (K-1) dof per index; the 0.999 quantile for 4 dof is 18.47.
  const Index n = 12;
  const Index k = 5;
  const int draws = 10000;
  std::vector<std::vector<int>> counts(n, std::vector<int>(k, 0));
  RandomStream rng(5);
  for (int d = 0; d < draws; ++d) {
    const CvSegmentation seg = make_segments(n, k, rng);
    for (Index s = 0; s < k; ++s)
      for (Index i : seg.segments[s]) ++counts[i][s];
  }
  for (Index i = 0; i < n; ++i) {
    double chi2 = 0.0;
    for (Index s = 0; s < k; ++s) {
      // segment s has size 3 for s < 2, else 2
      const double expected = draws * (s < n % k ? 3.0 : 2.0) / static_cast<double>(n);
      chi2 += (counts[i][s] - expected) * (counts[i][s] - expected) / expected;
    }
    EXPECT_LT(chi2, 18.47) << "index " << i;
  }
}

TEST(SplitRandom, CalibrationSizeRoundsHalfUp) {
  RandomStream rng(6);
  const Split s = split_random(209, 0.6, rng);
  EXPECT_EQ(s.calibration.size(), 125u);
  EXPECT_EQ(s.test.size(), 84u);
  const Split half = split_random(10, 0.5, rng);
  EXPECT_EQ(half.calibration.size(), 5u);
  EXPECT_EQ(half.test.size(), 5u);
  EXPECT_EQ(calibration_size(5, 0.5), 3u);
}

TEST(SplitRandom, DegenerateSizes) {
  RandomStream rng(7);
  EXPECT_THROW(split_random(4, 0.9, rng), SplitError);
  EXPECT_THROW(split_random(10, 0.0, rng), SplitError);
  EXPECT_THROW(split_random(10, 1.0, rng), SplitError);
}

TEST(SplitRandom, ReproducibleAndDisjoint) {
  RandomStream a(8);
  RandomStream b(8);
  const Split s1 = split_random(50, 0.6, a);
  const Split s2 = split_random(50, 0.6, b);
  EXPECT_EQ(s1.calibration, s2.calibration);
  EXPECT_EQ(s1.test, s2.test);
  std::vector<Index> all = s1.calibration;
  all.insert(all.end(), s1.test.begin(), s1.test.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
  EXPECT_EQ(all.size(), 50u);
}

TEST(RandomStream, UniformIndexStaysInRange) {
  RandomStream rng(9);
  for (std::uint64_t n : {1ULL, 2ULL, 3ULL, 7ULL, 1000ULL}) {
    for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.uniform_index(n), n);
  }
}

TEST(RandomStream, DerivedSeedsDiffer) {
  EXPECT_NE(derive_seed(1, {0}), derive_seed(1, {1}));
  EXPECT_NE(derive_seed(1, {0, 1}), derive_seed(1, {1, 0}));
  EXPECT_EQ(derive_seed(5, {3, 4}), derive_seed(5, {3, 4}));
}

}  // namespace
}  // namespace plsga
