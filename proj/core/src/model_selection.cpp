#include "plsga/model_selection.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "plsga/error.hpp"

namespace plsga {

MsepCurve MsepCurve::from_segments(Eigen::MatrixXd per_segment_msep) {
  MsepCurve curve;
  curve.msep = per_segment_msep.colwise().mean().transpose();
  curve.per_segment_msep = std::move(per_segment_msep);
  return curve;
}

std::size_t default_max_components(std::size_t n_cal, std::size_t q, std::size_t k, std::size_t cap) {
  if (k < 2 || n_cal < k) {
    return 0;
  }
  const std::size_t smallest_fold = n_cal * (k - 1) / k;
  if (smallest_fold < 2) {
    return 0;
  }
  return std::min({q, smallest_fold - 1, cap});
}

MsepCurve cv_msep(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const CvSegmentation& segmentation,
                  std::size_t max_components, PlsFitter fitter) {
  const std::size_t k_segments = segmentation.size();
  if (k_segments < 2) {
    throw SegmentationError("cross-validation needs at least two segments");
  }
  if (segmentation.n_total != static_cast<std::size_t>(x.rows()) || x.rows() != y.size()) {
    throw ShapeError("segmentation does not match the data");
  }
  for (std::size_t k = 0; k < k_segments; ++k) {
    const std::size_t train = segmentation.n_total - segmentation.segments[k].size();
    if (train < max_components + 1) {
      throw ComponentsError("training fold of " + std::to_string(train) + " rows cannot support " +
                            std::to_string(max_components) + " components");
    }
  }

  const auto a_max = static_cast<Eigen::Index>(max_components);
  Eigen::MatrixXd per_segment(static_cast<Eigen::Index>(k_segments), a_max);

  // Rows in segment order; the training rows of fold k are then the two
  // blocks around segment k, in the same order complement(k) lists them.
  IndexList order;
  order.reserve(segmentation.n_total);
  std::vector<Eigen::Index> starts;
  for (const IndexList& seg : segmentation.segments) {
    starts.push_back(static_cast<Eigen::Index>(order.size()));
    order.insert(order.end(), seg.begin(), seg.end());
  }
  const Eigen::MatrixXd xs = gather_rows(x, order);
  const Eigen::VectorXd ys = gather(y, order);
  const Eigen::Index n = xs.rows();

  Eigen::MatrixXd x_train;
  Eigen::VectorXd y_train;
  for (std::size_t k = 0; k < k_segments; ++k) {
    const Eigen::Index begin = starts[k];
    const auto size = static_cast<Eigen::Index>(segmentation.segments[k].size());
    const Eigen::Index tail = n - begin - size;
    x_train.resize(n - size, xs.cols());
    y_train.resize(n - size);
    x_train.topRows(begin) = xs.topRows(begin);
    x_train.bottomRows(tail) = xs.bottomRows(tail);
    y_train.head(begin) = ys.head(begin);
    y_train.tail(tail) = ys.tail(tail);

    const PlsModel model = fit_pls(fitter, x_train, y_train, max_components);
    const Eigen::MatrixXd predictions = model.predict_all(xs.middleRows(begin, size));
    const auto y_out = ys.segment(begin, size);
    const Eigen::Index usable = predictions.cols();
    for (Eigen::Index a = 0; a < a_max; ++a) {
      // A truncated fit adds nothing beyond its last component.
      const Eigen::Index col = std::min(a, usable - 1);
      per_segment(static_cast<Eigen::Index>(k), a) =
          (y_out - predictions.col(col)).squaredNorm() / static_cast<double>(size);
    }
  }
  return MsepCurve::from_segments(std::move(per_segment));
}

Eigen::VectorXd se_of_msep(const MsepCurve& curve) {
  const auto k = curve.per_segment_msep.rows();
  if (k < 2) {
    throw SegmentationError("standard error needs at least two segments");
  }
  const Eigen::MatrixXd dev = curve.per_segment_msep.rowwise() - curve.msep.transpose();
  return (dev.array().square().colwise().sum() / static_cast<double>(k - 1)).sqrt().transpose();
}

ComponentChoice choose_components(const MsepCurve& curve) {
  ComponentChoice choice;
  choice.se = se_of_msep(curve);
  const auto a_max = curve.msep.size();

  Eigen::Index m = 0;
  for (Eigen::Index a = 1; a < a_max; ++a) {
    if (curve.msep(a) < curve.msep(m)) {
      m = a;
    }
  }
  const double threshold =
      curve.msep(m) + choice.se(m) / std::sqrt(static_cast<double>(curve.per_segment_msep.rows()));
  Eigen::Index a_opt = m;
  for (Eigen::Index a = 0; a <= m; ++a) {
    if (curve.msep(a) <= threshold) {
      a_opt = a;
      break;
    }
  }
  choice.a_min = static_cast<std::size_t>(m) + 1;
  choice.a_opt = static_cast<std::size_t>(a_opt) + 1;
  return choice;
}

}  // namespace plsga
