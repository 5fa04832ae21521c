#pragma once

#include "playstyle/cluster/embedding.hpp"

#include <string>
#include <vector>

namespace playstyle::cluster {

/// Mean-centred projection onto the leading principal components. When the
/// input already has at most `dims` columns the model is the identity.
struct PcaModel {
    Eigen::VectorXd mean;
    Eigen::MatrixXd components;// D×k, orthonormal columns
    Eigen::VectorXd eigenvalues;// k leading covariance eigenvalues, descending
    double total_variance = 0.0;
    bool identity = false;

    [[nodiscard]] Eigen::MatrixXd apply(const Eigen::MatrixXd &x) const;
    /// Variance not captured by the kept components.
    [[nodiscard]] double residual_variance() const noexcept { return total_variance - eigenvalues.sum(); }
};

/// Fits on the rows of `x`. If the data has rank below `dims`, only the
/// components with non-zero variance are kept and a warning is appended.
[[nodiscard]] PcaModel fit_pca(const Eigen::MatrixXd &x, int dims = 64, std::vector<std::string> *warnings = nullptr);

/// Fits on all rows and projects them.
[[nodiscard]] EmbeddingSet pca_reduce(const EmbeddingSet &e, int dims = 64, std::vector<std::string> *warnings = nullptr);

}// namespace playstyle::cluster
