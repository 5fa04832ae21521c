#include "playstyle/cluster/pca.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <stdexcept>

namespace playstyle::cluster {

Eigen::MatrixXd PcaModel::apply(const Eigen::MatrixXd &x) const
{
    if (identity) { return x; }
    if (x.cols() != mean.size()) { throw std::invalid_argument("pca: input dimension differs from the fitted model"); }
    return (x.rowwise() - mean.transpose()) * components;
}

PcaModel fit_pca(const Eigen::MatrixXd &x, int dims, std::vector<std::string> *warnings)
{
    if (dims <= 0) { throw std::invalid_argument("pca: dims must be positive"); }
    PcaModel model;
    if (x.cols() <= dims) {
        model.identity = true;
        return model;
    }
    if (x.rows() < 2) { throw std::invalid_argument("pca: need at least two rows"); }
    model.mean = x.colwise().mean();
    const Eigen::MatrixXd centred = x.rowwise() - model.mean.transpose();
    const Eigen::MatrixXd cov = centred.transpose() * centred / static_cast<double>(x.rows() - 1);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
    if (solver.info() != Eigen::Success) { throw std::runtime_error("pca: eigendecomposition failed"); }
    model.total_variance = cov.trace();

    // Eigen returns ascending eigenvalues; keep the largest ones with non-negligible variance.
    const auto &values = solver.eigenvalues();
    const double floor = std::max(values.maxCoeff(), 0.0) * 1e-12;
    int keep = 0;
    while (keep < dims && values(values.size() - 1 - keep) > floor) { ++keep; }
    if (keep < dims && warnings != nullptr) {
        warnings->push_back(fmt::format("pca: data has rank {} < {}; keeping {} components", keep, dims, keep));
    }
    model.components.resize(x.cols(), keep);
    model.eigenvalues.resize(keep);
    for (int i = 0; i < keep; ++i) {
        const auto col = values.size() - 1 - i;
        Eigen::VectorXd v = solver.eigenvectors().col(col);
        // Fix the sign so the largest-magnitude entry is positive.
        Eigen::Index at = 0;
        v.cwiseAbs().maxCoeff(&at);
        if (v(at) < 0) { v = -v; }
        model.components.col(i) = v;
        model.eigenvalues(i) = values(col);
    }
    return model;
}

EmbeddingSet pca_reduce(const EmbeddingSet &e, int dims, std::vector<std::string> *warnings)
{
    e.validate();
    if (e.rows() <= dims && e.dims() > dims) {
        throw std::invalid_argument(fmt::format("pca: need more than {} rows, got {}", dims, e.rows()));
    }
    EmbeddingSet out = e;
    out.data = fit_pca(e.data, dims, warnings).apply(e.data);
    return out;
}

}// namespace playstyle::cluster
