#include "playstyle/cluster/embedding.hpp"

#include <stdexcept>

namespace playstyle::cluster {

void EmbeddingSet::validate() const
{
    if (static_cast<std::size_t>(data.rows()) != meta.size()) {
        throw std::invalid_argument("embedding set: " + std::to_string(data.rows()) + " rows but " + std::to_string(meta.size()) + " metadata entries");
    }
    if (!data.allFinite()) { throw std::invalid_argument("embedding set contains non-finite values"); }
}

EmbeddingSet EmbeddingSet::subset(const std::vector<std::size_t> &rows) const
{
    EmbeddingSet out;
    out.data.resize(static_cast<Eigen::Index>(rows.size()), data.cols());
    out.meta.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.data.row(static_cast<Eigen::Index>(i)) = data.row(static_cast<Eigen::Index>(rows[i]));
        out.meta.push_back(meta.at(rows[i]));
    }
    return out;
}

}// namespace playstyle::cluster
