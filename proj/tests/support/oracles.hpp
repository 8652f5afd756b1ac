#pragma once

// Independent reference computations used only by the test suites.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "plsga/dataset.hpp"
#include "plsga/pls.hpp"
#include "plsga/random.hpp"
#include "plsga/synthetic.hpp"

namespace plsga::testing {

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, RandomStream& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = standard_normal(rng);
  return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, RandomStream& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = standard_normal(rng);
  return v;
}

/// OLS with intercept through the normal equations and an explicit inverse.
/// Returns intercept first.
inline Eigen::VectorXd ols_normal_equations(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  Eigen::MatrixXd design(x.rows(), x.cols() + 1);
  design.col(0).setOnes();
  design.rightCols(x.cols()) = x;
  const Eigen::MatrixXd gram = design.transpose() * design;
  return gram.inverse() * (design.transpose() * y);
}

inline double ols_rss(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  const Eigen::VectorXd beta = ols_normal_equations(x, y);
  const Eigen::VectorXd fitted = (x * beta.tail(x.cols())).array() + beta(0);
  return (y - fitted).squaredNorm();
}

/// max |a - b| / max |b|.
inline double relative_deviation(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = b.cwiseAbs().maxCoeff();
  return (a - b).cwiseAbs().maxCoeff() / (scale > 0.0 ? scale : 1.0);
}

/// P(G_u - G_v = k) by explicit enumeration over all outcome pairs, where
/// G_t is geometric(p) on {0, 1, ...} conditioned on G_t <= t.
inline double dtgeom_convolution(int k, double p, int lower, int upper) {
  const double q = 1.0 - p;
  const int v = -lower;
  auto truncated = [&](int i, int t) {
    if (p == 1.0) return i == 0 ? 1.0 : 0.0;
    double norm = 0.0;
    for (int j = 0; j <= t; ++j) norm += p * std::pow(q, j);
    return p * std::pow(q, i) / norm;
  };
  double total = 0.0;
  for (int i = 0; i <= upper; ++i)
    for (int j = 0; j <= v; ++j)
      if (i - j == k) total += truncated(i, upper) * truncated(j, v);
  return total;
}

/// Per-(k, a) refit: a fresh model with exactly a components for every fold
/// and component count, then the segment-mean squared error.
inline Eigen::MatrixXd refit_per_segment_msep(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                              const CvSegmentation& seg, std::size_t a_max) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(seg.size()), static_cast<Eigen::Index>(a_max));
  for (std::size_t k = 0; k < seg.size(); ++k) {
    std::vector<Index> train;
    for (std::size_t j = 0; j < seg.size(); ++j)
      if (j != k) train.insert(train.end(), seg.segments[j].begin(), seg.segments[j].end());
    const auto& test = seg.segments[k];
    Eigen::MatrixXd xt(static_cast<Eigen::Index>(train.size()), x.cols());
    Eigen::VectorXd yt(static_cast<Eigen::Index>(train.size()));
    for (std::size_t i = 0; i < train.size(); ++i) {
      xt.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(train[i]));
      yt(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(train[i]));
    }
    Eigen::MatrixXd xs(static_cast<Eigen::Index>(test.size()), x.cols());
    Eigen::VectorXd ys(static_cast<Eigen::Index>(test.size()));
    for (std::size_t i = 0; i < test.size(); ++i) {
      xs.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(test[i]));
      ys(static_cast<Eigen::Index>(i)) = y(static_cast<Eigen::Index>(test[i]));
    }
    for (std::size_t a = 1; a <= a_max; ++a) {
      const PlsModel model = fit_simpls(xt, yt, a);
      const Eigen::VectorXd residual = ys - model.predict(xs, std::min(a, model.components()));
      out(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(a - 1)) =
          residual.squaredNorm() / static_cast<double>(test.size());
    }
  }
  return out;
}

/// Direct evaluation of the one-standard-error rule from per-segment values:
/// returns {a_opt, a_min}, 1-based.
inline std::pair<std::size_t, std::size_t> one_se_rule(const Eigen::MatrixXd& per_segment) {
  const auto k = per_segment.rows();
  const auto a_max = per_segment.cols();
  std::vector<double> msep(static_cast<std::size_t>(a_max));
  for (Eigen::Index a = 0; a < a_max; ++a) {
    double s = 0.0;
    for (Eigen::Index r = 0; r < k; ++r) s += per_segment(r, a);
    msep[static_cast<std::size_t>(a)] = s / static_cast<double>(k);
  }
  std::size_t m = 0;
  for (std::size_t a = 0; a < msep.size(); ++a)
    if (msep[a] < msep[m]) m = a;
  double ss = 0.0;
  for (Eigen::Index r = 0; r < k; ++r) {
    const double d = msep[m] - per_segment(r, static_cast<Eigen::Index>(m));
    ss += d * d;
  }
  const double se = std::sqrt(ss / static_cast<double>(k - 1));
  const double threshold = msep[m] + se / std::sqrt(static_cast<double>(k));
  std::size_t a_opt = m;
  for (std::size_t a = 0; a < msep.size(); ++a) {
    if (msep[a] <= threshold) {
      a_opt = a;
      break;
    }
  }
  return {a_opt + 1, m + 1};
}

}  // namespace plsga::testing
