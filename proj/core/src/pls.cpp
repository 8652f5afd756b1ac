#include "plsga/pls.hpp"

#include <cmath>
#include <string>

#include "plsga/error.hpp"

namespace plsga {

namespace {

void check_inputs(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::size_t max_components) {
  if (x.rows() != y.size()) {
    throw ShapeError("predictor rows (" + std::to_string(x.rows()) + ") and response length (" +
                     std::to_string(y.size()) + ") differ");
  }
  if (x.rows() < 2) {
    throw ComponentsError("at least two observations are required to fit a PLS model");
  }
  const auto limit = static_cast<std::size_t>(std::min<Eigen::Index>(x.cols(), x.rows() - 1));
  if (max_components < 1 || max_components > limit) {
    throw ComponentsError("cannot fit " + std::to_string(max_components) + " components to a " +
                          std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + " matrix");
  }
}

}  // namespace

PlsModel::PlsModel(Eigen::VectorXd x_means, double y_mean, Eigen::MatrixXd coefficients,
                   std::size_t requested_components)
    : x_means_(std::move(x_means)),
      y_mean_(y_mean),
      coefficients_(std::move(coefficients)),
      requested_(requested_components) {
  intercepts_ = (y_mean_ - (x_means_.transpose() * coefficients_).array()).transpose();
}

Eigen::VectorXd PlsModel::predict(const Eigen::MatrixXd& x_new, std::size_t a) const {
  if (x_new.cols() != x_means_.size()) {
    throw ShapeError("model expects " + std::to_string(x_means_.size()) + " columns, got " +
                     std::to_string(x_new.cols()));
  }
  if (a < 1 || a > components()) {
    throw ShapeError("cannot predict with " + std::to_string(a) + " components; the model has " +
                     std::to_string(components()));
  }
  const auto col = static_cast<Eigen::Index>(a - 1);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x_new.rows());
  Eigen::VectorXd centered(x_new.rows());
  for (Eigen::Index j = 0; j < x_new.cols(); ++j) {
    centered = x_new.col(j).array() - x_means_(j);
    out += coefficients_(j, col) * centered;
  }
  return out.array() + y_mean_;
}

Eigen::MatrixXd PlsModel::predict_all(const Eigen::MatrixXd& x_new) const {
  if (x_new.cols() != x_means_.size()) {
    throw ShapeError("model expects " + std::to_string(x_means_.size()) + " columns, got " +
                     std::to_string(x_new.cols()));
  }
  // Same accumulation order as predict(), column by column.
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(x_new.rows(), coefficients_.cols());
  Eigen::VectorXd centered(x_new.rows());
  for (Eigen::Index j = 0; j < x_new.cols(); ++j) {
    centered = x_new.col(j).array() - x_means_(j);
    for (Eigen::Index a = 0; a < coefficients_.cols(); ++a) {
      out.col(a) += coefficients_(j, a) * centered;
    }
  }
  return out.array() + y_mean_;
}

PlsModel fit_simpls(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::size_t max_components,
                    bool reorthogonalize) {
  check_inputs(x, y, max_components);
  const Eigen::Index q = x.cols();
  const auto a_max = static_cast<Eigen::Index>(max_components);

  Eigen::VectorXd x_means = x.colwise().mean().transpose();
  const double y_mean = y.mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_means.transpose();
  const Eigen::VectorXd yc = y.array() - y_mean;

  Eigen::MatrixXd coef = Eigen::MatrixXd::Zero(q, a_max);
  Eigen::MatrixXd v_basis(q, a_max);
  Eigen::VectorXd s0(q);
  for (Eigen::Index j = 0; j < q; ++j) {
    s0(j) = xc.col(j).dot(yc);
  }
  Eigen::VectorXd s = s0;  // cross-covariance, deflated each step
  Eigen::VectorXd r(q);
  Eigen::VectorXd v(q);

  // Narrow blocks go through the cross-product matrix, wide ones through the
  // score vector; the choice depends on the shape only.
  const bool use_gram = 2 * q <= x.rows();
  Eigen::MatrixXd gram;
  Eigen::VectorXd t;
  if (use_gram) {
    gram.resize(q, q);
    for (Eigen::Index j = 0; j < q; ++j) {
      for (Eigen::Index i = j; i < q; ++i) {
        gram(i, j) = gram(j, i) = xc.col(i).dot(xc.col(j));
      }
    }
  } else {
    t.resize(x.rows());
  }

  const double first_norm = s.norm();
  Eigen::Index fitted = 0;
  for (Eigen::Index a = 0; a < a_max; ++a) {
    const double s_norm = s.norm();
    if (!(s_norm > kWeightNormTolerance * first_norm)) {
      break;
    }
    r = s;
    // v = X'X r and t_norm = |X r|
    double t_norm2 = 0.0;
    if (use_gram) {
      v.noalias() = gram * r;
      t_norm2 = r.dot(v);
    } else {
      t.setZero();
      for (Eigen::Index j = 0; j < q; ++j) {
        t += r(j) * xc.col(j);
      }
      t_norm2 = t.squaredNorm();
      for (Eigen::Index j = 0; j < q; ++j) {
        v(j) = xc.col(j).dot(t);
      }
    }
    const double t_norm = std::sqrt(t_norm2);
    if (!(t_norm > 0.0) || !std::isfinite(t_norm)) {
      break;
    }
    r /= t_norm;
    v /= t_norm;
    const double y_loading = s0.dot(r);

    const int sweeps = reorthogonalize ? 2 : 1;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
      for (Eigen::Index j = 0; j < a; ++j) {
        v -= v_basis.col(j).dot(v) * v_basis.col(j);
      }
    }
    const double v_norm = v.norm();
    if (!(v_norm > 0.0)) {
      break;
    }
    v /= v_norm;
    v_basis.col(a) = v;
    s -= v * v.dot(s);

    coef.col(a) = r * y_loading;
    if (a > 0) {
      coef.col(a) += coef.col(a - 1);
    }
    fitted = a + 1;
  }

  if (fitted == 0) {
    // No covariance between x and y: the one-component model predicts the mean.
    return PlsModel(x_means, y_mean, Eigen::MatrixXd::Zero(q, 1), max_components);
  }
  if (fitted < a_max) {
    coef.conservativeResize(Eigen::NoChange, fitted);
  }
  return PlsModel(std::move(x_means), y_mean, std::move(coef), max_components);
}

PlsModel fit_pls_oracle(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::size_t max_components) {
  check_inputs(x, y, max_components);
  const Eigen::Index q = x.cols();
  const auto a_max = static_cast<Eigen::Index>(max_components);

  const Eigen::VectorXd x_means = x.colwise().mean().transpose();
  const double y_mean = y.mean();
  Eigen::MatrixXd xa = x.rowwise() - x_means.transpose();
  Eigen::VectorXd ya = y.array() - y_mean;

  Eigen::MatrixXd weights(q, a_max);
  Eigen::MatrixXd loadings(q, a_max);
  Eigen::VectorXd y_loadings(a_max);
  Eigen::MatrixXd coef(q, a_max);

  double first_norm = 0.0;
  Eigen::Index fitted = 0;
  for (Eigen::Index a = 0; a < a_max; ++a) {
    Eigen::VectorXd w = xa.transpose() * ya;
    const double w_norm = w.norm();
    if (a == 0) {
      first_norm = w_norm;
    }
    if (!(w_norm > kWeightNormTolerance * first_norm) || !(w_norm > 0.0)) {
      break;
    }
    w /= w_norm;
    const Eigen::VectorXd t = xa * w;
    const double tt = t.squaredNorm();
    if (!(tt > 0.0)) {
      break;
    }
    const Eigen::VectorXd p = xa.transpose() * t / tt;
    const double c = ya.dot(t) / tt;
    xa -= t * p.transpose();
    ya -= c * t;

    weights.col(a) = w;
    loadings.col(a) = p;
    y_loadings(a) = c;

    // B = W (P'W)^-1 c for the first a+1 components.
    const Eigen::Index k = a + 1;
    const Eigen::MatrixXd pw = loadings.leftCols(k).transpose() * weights.leftCols(k);
    const Eigen::VectorXd z = pw.fullPivLu().solve(y_loadings.head(k));
    coef.col(a) = weights.leftCols(k) * z;
    fitted = k;
  }

  if (fitted == 0) {
    return PlsModel(x_means, y_mean, Eigen::MatrixXd::Zero(q, 1), max_components);
  }
  return PlsModel(x_means, y_mean, coef.leftCols(fitted), max_components);
}

PlsModel fit_pls(PlsFitter fitter, const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::size_t max_components) {
  switch (fitter) {
    case PlsFitter::oracle:
      return fit_pls_oracle(x, y, max_components);
    case PlsFitter::simpls:
    default:
      return fit_simpls(x, y, max_components);
  }
}

OlsModel fit_ols(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) {
    throw ShapeError("predictor rows and response length differ");
  }
  if (x.rows() < x.cols() + 2) {
    throw SingularDesignError("least squares needs at least " + std::to_string(x.cols() + 2) +
                              " observations for " + std::to_string(x.cols()) + " variables");
  }
  const Eigen::RowVectorXd x_means = x.colwise().mean();
  const double y_mean = y.mean();
  const Eigen::MatrixXd xc = x.rowwise() - x_means;
  const Eigen::VectorXd yc = y.array() - y_mean;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xc);
  if (qr.rank() < xc.cols()) {
    throw SingularDesignError("design matrix is rank deficient (rank " + std::to_string(qr.rank()) + " < " +
                              std::to_string(xc.cols()) + ")");
  }
  const Eigen::VectorXd slope = qr.solve(yc);

  OlsModel model;
  model.coefficients.resize(x.cols() + 1);
  model.coefficients(0) = y_mean - x_means.dot(slope);
  model.coefficients.tail(x.cols()) = slope;
  model.rss = (yc - xc * slope).squaredNorm();
  if (!model.coefficients.allFinite()) {
    throw SingularDesignError("least squares solution is not finite");
  }
  return model;
}

}  // namespace plsga
