#pragma once

#include <Eigen/Core>
#include <vector>

#include "kode/core.hpp"

namespace kode {

// Pairwise Gaussian kernel evaluations over a point set. Exactly symmetric by
// construction (each unordered pair is computed once and mirrored) with a unit
// diagonal.
struct GramMatrix {
  Eigen::MatrixXd entries;
  double bandwidth = 0.0;
};

// K(a, b) = exp(-|a - b|^2 / (2 s^2)), the multivariate Gaussian kernel.
// Always in (0, 1].
double gaussian_kernel(const State& a, const State& b, double bandwidth);

GramMatrix gram_matrix(const std::vector<State>& points, double bandwidth);

// Evaluation vector k(x) with k[i] = K(centers[i], x).
Eigen::VectorXd kernel_row(const State& x, const std::vector<State>& centers,
                           double bandwidth);

// Median of all pairwise Euclidean distances; for an even pair count the
// lower median (deterministic tie rule). Fails if the median is zero.
double median_heuristic_bandwidth(const std::vector<State>& points);

}  // namespace kode
