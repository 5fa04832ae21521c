#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace playstyle::cluster {

struct TsneConfig {
    double perplexity = 30.0;
    int iterations = 1000;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
    int exaggeration_iterations = 250;
    std::uint64_t seed = 0;
};

/// Exact t-SNE to two dimensions. Throws std::invalid_argument when
/// N <= 3 * perplexity.
[[nodiscard]] Eigen::MatrixXd tsne_project(const Eigen::MatrixXd &x, const TsneConfig &config = {});

/// Largest usable perplexity for N points, capped at `preferred`.
[[nodiscard]] double fitted_perplexity(Eigen::Index n, double preferred = 30.0) noexcept;

}// namespace playstyle::cluster
