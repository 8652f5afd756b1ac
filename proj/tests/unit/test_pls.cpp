#include <gtest/gtest.h>

#include "oracles.hpp"
#include "plsga/error.hpp"
#include "plsga/pls.hpp"

namespace plsga {
namespace {

using testing::random_matrix;
using testing::random_vector;
using testing::relative_deviation;

TEST(Simpls, SingleColumnEqualsUnivariateSlope) {
  RandomStream rng(11);
  const Eigen::MatrixXd x = random_matrix(20, 1, rng);
  const Eigen::VectorXd y = 2.0 * x.col(0) + random_vector(20, rng);
  const Eigen::VectorXd xc = x.col(0).array() - x.col(0).mean();
  const Eigen::VectorXd yc = y.array() - y.mean();
  const double slope = xc.dot(yc) / xc.squaredNorm();

  const PlsModel simpls = fit_simpls(x, y, 1);
  const PlsModel oracle = fit_pls_oracle(x, y, 1);
  EXPECT_NEAR(simpls.coefficients()(0, 0), slope, 1e-12 * std::abs(slope));
  EXPECT_NEAR(oracle.coefficients()(0, 0), slope, 1e-12 * std::abs(slope));
}

TEST(Simpls, FullComponentsEqualOls) {
  RandomStream rng(12);
  const Eigen::MatrixXd x = random_matrix(30, 10, rng);
  const Eigen::VectorXd y = random_vector(30, rng);
  const PlsModel model = fit_simpls(x, y, 10);
  const Eigen::VectorXd ols = testing::ols_normal_equations(x, y);
  EXPECT_LT(relative_deviation(model.coefficients().col(9), ols.tail(10)), 1e-6);
  EXPECT_NEAR(model.intercepts()(9), ols(0), 1e-6 * std::max(1.0, std::abs(ols(0))));

  // Training residuals of the full model equal OLS residuals.
  const Eigen::VectorXd fitted = model.predict(x, 10);
  const Eigen::VectorXd ols_fitted = (x * ols.tail(10)).array() + ols(0);
  EXPECT_LT((fitted - ols_fitted).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Simpls, MatchesNipalsOracle) {
  RandomStream rng(13);
  const Eigen::MatrixXd x = random_matrix(30, 10, rng);
  const Eigen::VectorXd y = random_vector(30, rng);
  const PlsModel a = fit_simpls(x, y, 5);
  const PlsModel b = fit_pls_oracle(x, y, 5);
  ASSERT_EQ(a.components(), 5u);
  ASSERT_EQ(b.components(), 5u);
  for (Eigen::Index c = 0; c < 5; ++c) {
    EXPECT_LT(relative_deviation(a.coefficients().col(c), b.coefficients().col(c)), 1e-8) << "component " << c + 1;
  }
}

TEST(Simpls, AgreesWithOracleOnFiftyProblems) {
  RandomStream rng(14);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::MatrixXd x = random_matrix(25, 8, rng);
    const Eigen::VectorXd y = random_vector(25, rng);
    const PlsModel a = fit_simpls(x, y, 6);
    const PlsModel b = fit_pls_oracle(x, y, 6);
    ASSERT_EQ(a.components(), b.components());
    for (Eigen::Index c = 0; c < 6; ++c) {
      worst = std::max(worst, relative_deviation(a.coefficients().col(c), b.coefficients().col(c)));
    }
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Simpls, NearDuplicateColumnsStillAgree) {
  RandomStream rng(15);
  Eigen::MatrixXd x = random_matrix(25, 6, rng);
  // corr(x0, x1) ~ 0.9999
  x.col(1) = x.col(0) + 0.0141 * random_vector(25, rng);
  const Eigen::VectorXd y = x.col(0) - x.col(3) + 0.3 * random_vector(25, rng);
  const PlsModel a = fit_simpls(x, y, 6);
  const PlsModel b = fit_pls_oracle(x, y, 6);
  ASSERT_EQ(a.components(), b.components());
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(a.components()); ++c) {
    EXPECT_LT(relative_deviation(a.coefficients().col(c), b.coefficients().col(c)), 1e-6);
  }
}

TEST(Simpls, ReorthogonalizationGivesSameModel) {
  RandomStream rng(16);
  const Eigen::MatrixXd x = random_matrix(40, 12, rng);
  const Eigen::VectorXd y = random_vector(40, rng);
  const PlsModel a = fit_simpls(x, y, 10, false);
  const PlsModel b = fit_simpls(x, y, 10, true);
  EXPECT_LT(relative_deviation(a.coefficients(), b.coefficients()), 1e-9);
}

TEST(Simpls, ScaleEquivariance) {
  RandomStream rng(17);
  const Eigen::MatrixXd x = random_matrix(30, 8, rng);
  const Eigen::VectorXd y = random_vector(30, rng);
  const double c = 3.7;
  const PlsModel a = fit_simpls(x, y, 6);
  const PlsModel b = fit_simpls(x, c * y, 6);
  EXPECT_LT(relative_deviation(b.coefficients(), c * a.coefficients()), 1e-12);
  EXPECT_LT(relative_deviation(b.intercepts(), c * a.intercepts()), 1e-12);
}

TEST(Simpls, PredictionAtMeanIsResponseMean) {
  RandomStream rng(18);
  const Eigen::MatrixXd x = random_matrix(20, 5, rng);
  const Eigen::VectorXd y = random_vector(20, rng);
  const PlsModel model = fit_simpls(x, y, 4);
  const Eigen::MatrixXd at_mean = model.x_means().transpose();
  for (std::size_t a = 1; a <= 4; ++a) {
    EXPECT_DOUBLE_EQ(model.predict(at_mean, a)(0), y.mean());
  }
}

TEST(Simpls, PredictRejectsTooManyComponentsAndBadShape) {
  RandomStream rng(19);
  const Eigen::MatrixXd x = random_matrix(20, 5, rng);
  const Eigen::VectorXd y = random_vector(20, rng);
  const PlsModel model = fit_simpls(x, y, 3);
  EXPECT_THROW(model.predict(x, 4), ShapeError);
  EXPECT_THROW(model.predict(x, 0), ShapeError);
  EXPECT_THROW(model.predict(random_matrix(3, 4, rng), 1), ShapeError);
}

TEST(Simpls, InvalidComponentCounts) {
  RandomStream rng(20);
  const Eigen::MatrixXd x = random_matrix(5, 8, rng);
  const Eigen::VectorXd y = random_vector(5, rng);
  EXPECT_THROW(fit_simpls(x, y, 0), ComponentsError);
  EXPECT_THROW(fit_simpls(x, y, 5), ComponentsError);  // n - 1 = 4
  EXPECT_NO_THROW(fit_simpls(x, y, 4));
}

TEST(Simpls, TruncatesInsteadOfProducingNan) {
  // Rank-2 predictors: the weight vanishes after two components.
  RandomStream rng(21);
  const Eigen::MatrixXd base = random_matrix(20, 2, rng);
  Eigen::MatrixXd x(20, 5);
  x << base, base.col(0) + base.col(1), 2.0 * base.col(0), base.col(1) - base.col(0);
  const Eigen::VectorXd y = random_vector(20, rng);
  const PlsModel model = fit_simpls(x, y, 5);
  EXPECT_TRUE(model.truncated());
  EXPECT_LE(model.components(), 2u);
  EXPECT_GE(model.components(), 1u);
  EXPECT_TRUE(model.coefficients().allFinite());
}

TEST(Simpls, ZeroCovarianceGivesMeanModel) {
  Eigen::MatrixXd x(6, 2);
  x << 1, 2, 2, 1, 3, 5, 4, 4, 5, 0, 6, 3;
  const Eigen::VectorXd y = Eigen::VectorXd::Constant(6, 4.2);
  const PlsModel model = fit_simpls(x, y, 2);
  EXPECT_EQ(model.components(), 1u);
  EXPECT_TRUE(model.truncated());
  EXPECT_DOUBLE_EQ(model.predict(x, 1)(3), 4.2);
}

TEST(Ols, ExactLinearResponseHasZeroRss) {
  RandomStream rng(22);
  const Eigen::MatrixXd x = random_matrix(15, 3, rng);
  const Eigen::VectorXd y = (1.5 + (x * Eigen::Vector3d(1.0, -2.0, 0.5)).array()).matrix();
  const OlsModel model = fit_ols(x, y);
  EXPECT_LT(model.rss, 1e-10);
  EXPECT_NEAR(model.coefficients(0), 1.5, 1e-10);
}

TEST(Ols, DuplicatedColumnIsSingular) {
  RandomStream rng(23);
  Eigen::MatrixXd x = random_matrix(15, 3, rng);
  x.col(2) = x.col(0);
  EXPECT_THROW(fit_ols(x, random_vector(15, rng)), SingularDesignError);
}

TEST(Ols, MatchesNormalEquations) {
  RandomStream rng(24);
  const Eigen::MatrixXd x = random_matrix(20, 3, rng);
  const Eigen::VectorXd y = random_vector(20, rng);
  const OlsModel model = fit_ols(x, y);
  const Eigen::VectorXd oracle = testing::ols_normal_equations(x, y);
  EXPECT_LT((model.coefficients - oracle).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_NEAR(model.rss, testing::ols_rss(x, y), 1e-9);
}

TEST(Ols, TooFewRows) {
  RandomStream rng(25);
  EXPECT_THROW(fit_ols(random_matrix(4, 3, rng), random_vector(4, rng)), SingularDesignError);
}

}  // namespace
}  // namespace plsga
