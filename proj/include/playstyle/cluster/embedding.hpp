#pragma once

#include "playstyle/engine/types.hpp"

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace playstyle::cluster {

struct RowMeta {
    std::string sample_id;
    std::string trace_id;
    std::string label;
    char map = 'A';
    engine::Player side = engine::Player::p1;
    int slot = 0;
    std::string split;// train, val or test
};

/// N×D embedding matrix (one row per sample) with per-row metadata.
struct EmbeddingSet {
    Eigen::MatrixXd data;
    std::vector<RowMeta> meta;

    [[nodiscard]] Eigen::Index rows() const noexcept { return data.rows(); }
    [[nodiscard]] Eigen::Index dims() const noexcept { return data.cols(); }
    /// Throws std::invalid_argument on non-finite entries or a metadata length mismatch.
    void validate() const;
    [[nodiscard]] EmbeddingSet subset(const std::vector<std::size_t> &rows) const;
};

}// namespace playstyle::cluster
