#include "kode/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kode {

namespace {

void check_bandwidth(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw Error(ErrorKind::NonPositiveBandwidth,
                "bandwidth must be a positive finite real, got " +
                    std::to_string(s));
  }
}

void check_common_dimension(const std::vector<State>& points) {
  if (points.empty()) {
    throw Error(ErrorKind::TooShort, "need at least one point");
  }
  const Eigen::Index d = points.front().size();
  for (const State& p : points) {
    if (p.size() != d) {
      throw Error(ErrorKind::DimensionMismatch, "points have mixed dimensions");
    }
  }
}

}  // namespace

double gaussian_kernel(const State& a, const State& b, double bandwidth) {
  check_bandwidth(bandwidth);
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "kernel arguments have dimensions " + std::to_string(a.size()) +
                    " and " + std::to_string(b.size()));
  }
  const double sq = (a - b).squaredNorm();
  return std::exp(-sq / (2.0 * bandwidth * bandwidth));
}

GramMatrix gram_matrix(const std::vector<State>& points, double bandwidth) {
  check_bandwidth(bandwidth);
  check_common_dimension(points);
  const Eigen::Index m = static_cast<Eigen::Index>(points.size());
  GramMatrix gram;
  gram.bandwidth = bandwidth;
  gram.entries.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    gram.entries(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double v = gaussian_kernel(points[i], points[j], bandwidth);
      gram.entries(i, j) = v;
      gram.entries(j, i) = v;  // mirrored, so symmetry is exact
    }
  }
  return gram;
}

Eigen::VectorXd kernel_row(const State& x, const std::vector<State>& centers,
                           double bandwidth) {
  check_bandwidth(bandwidth);
  check_common_dimension(centers);
  if (x.size() != centers.front().size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "point has dimension " + std::to_string(x.size()) +
                    ", centers have " +
                    std::to_string(centers.front().size()));
  }
  const double denom = 2.0 * bandwidth * bandwidth;
  Eigen::VectorXd row(static_cast<Eigen::Index>(centers.size()));
  for (std::size_t i = 0; i < centers.size(); ++i) {
    row[static_cast<Eigen::Index>(i)] =
        std::exp(-(centers[i] - x).squaredNorm() / denom);
  }
  return row;
}

double median_heuristic_bandwidth(const std::vector<State>& points) {
  check_common_dimension(points);
  if (points.size() < 2) {
    throw Error(ErrorKind::TooShort,
                "median heuristic needs at least 2 points");
  }
  std::vector<double> dists;
  dists.reserve(points.size() * (points.size() - 1) / 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      dists.push_back((points[i] - points[j]).norm());
    }
  }
  // Lower median: element at index (P-1)/2 of the sorted distances.
  const std::size_t mid = (dists.size() - 1) / 2;
  std::nth_element(dists.begin(), dists.begin() + static_cast<std::ptrdiff_t>(mid),
                   dists.end());
  const double median = dists[mid];
  if (!(median > 0.0)) {
    throw Error(ErrorKind::AllPointsIdentical,
                "median pairwise distance is zero");
  }
  return median;
}

}  // namespace kode
