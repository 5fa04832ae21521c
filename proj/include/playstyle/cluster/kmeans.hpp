#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace playstyle::cluster {

struct KMeansConfig {
    int k = 10;
    int restarts = 10;
    int max_iterations = 300;
    double tolerance = 1e-4;// relative to the mean per-feature variance
    std::uint64_t seed = 0;
};

struct KMeansResult {
    std::vector<int> assignments;
    Eigen::MatrixXd centroids;// k×D
    double inertia = 0.0;
    std::vector<double> inertia_history;// after every assignment step of the kept restart
    int iterations = 0;
};

/// Lloyd's algorithm with k-means++ seeding; the restart with the lowest
/// inertia is kept. Throws std::invalid_argument when N < k.
[[nodiscard]] KMeansResult kmeans(const Eigen::MatrixXd &x, const KMeansConfig &config);

}// namespace playstyle::cluster
