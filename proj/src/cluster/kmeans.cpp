#include "playstyle/cluster/kmeans.hpp"

#include <fmt/format.h>
#include <limits>
#include <random>
#include <stdexcept>

namespace playstyle::cluster {

namespace {

    Eigen::MatrixXd plus_plus_seed(const Eigen::MatrixXd &x, int k, std::mt19937_64 &rng)
    {
        const auto n = x.rows();
        Eigen::MatrixXd centres(k, x.cols());
        std::uniform_int_distribution<Eigen::Index> first(0, n - 1);
        centres.row(0) = x.row(first(rng));
        Eigen::VectorXd d2 = (x.rowwise() - centres.row(0)).rowwise().squaredNorm();
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int c = 1; c < k; ++c) {
            const double total = d2.sum();
            Eigen::Index pick = 0;
            if (total > 0) {
                double r = unit(rng) * total;
                for (pick = 0; pick < n - 1; ++pick) {
                    r -= d2(pick);
                    if (r < 0) { break; }
                }
                if (d2(pick) == 0.0) { d2.maxCoeff(&pick); }
            } else {
                pick = first(rng);
            }
            centres.row(c) = x.row(pick);
            d2 = d2.cwiseMin((x.rowwise() - centres.row(c)).rowwise().squaredNorm());
        }
        return centres;
    }

    // Nearest centre per row (lowest index on ties); returns the inertia.
    double assign(const Eigen::MatrixXd &x, const Eigen::MatrixXd &centres, std::vector<int> &labels, Eigen::VectorXd &dist)
    {
        double inertia = 0.0;
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            double best = std::numeric_limits<double>::infinity();
            int arg = 0;
            for (Eigen::Index c = 0; c < centres.rows(); ++c) {
                const double d = (x.row(i) - centres.row(c)).squaredNorm();
                if (d < best) {
                    best = d;
                    arg = static_cast<int>(c);
                }
            }
            labels[static_cast<std::size_t>(i)] = arg;
            dist(i) = best;
            inertia += best;
        }
        return inertia;
    }

    KMeansResult lloyd(const Eigen::MatrixXd &x, Eigen::MatrixXd centres, const KMeansConfig &config, double tol)
    {
        KMeansResult r;
        r.assignments.assign(static_cast<std::size_t>(x.rows()), 0);
        Eigen::VectorXd dist(x.rows());
        for (int it = 0; it < config.max_iterations; ++it) {
            r.inertia = assign(x, centres, r.assignments, dist);
            r.inertia_history.push_back(r.inertia);
            r.iterations = it + 1;

            Eigen::MatrixXd next = Eigen::MatrixXd::Zero(centres.rows(), x.cols());
            std::vector<int> counts(static_cast<std::size_t>(centres.rows()), 0);
            for (Eigen::Index i = 0; i < x.rows(); ++i) {
                next.row(r.assignments[static_cast<std::size_t>(i)]) += x.row(i);
                ++counts[static_cast<std::size_t>(r.assignments[static_cast<std::size_t>(i)])];
            }
            for (Eigen::Index c = 0; c < centres.rows(); ++c) {
                if (counts[static_cast<std::size_t>(c)] > 0) {
                    next.row(c) /= counts[static_cast<std::size_t>(c)];
                    continue;
                }
                // Empty cluster: move its centre onto the point farthest from its own centre.
                Eigen::Index far = 0;
                dist.maxCoeff(&far);
                next.row(c) = x.row(far);
                dist(far) = 0.0;
            }
            const double shift = (next - centres).squaredNorm();
            centres = std::move(next);
            if (shift <= tol) { break; }
        }
        r.inertia = assign(x, centres, r.assignments, dist);
        if (r.inertia < r.inertia_history.back()) { r.inertia_history.push_back(r.inertia); }
        r.centroids = std::move(centres);
        return r;
    }

}// namespace

KMeansResult kmeans(const Eigen::MatrixXd &x, const KMeansConfig &config)
{
    if (config.k <= 0) { throw std::invalid_argument("kmeans: k must be positive"); }
    if (x.rows() < config.k) { throw std::invalid_argument(fmt::format("kmeans: {} points cannot form {} clusters", x.rows(), config.k)); }
    if (!x.allFinite()) { throw std::invalid_argument("kmeans: non-finite input"); }
    const Eigen::RowVectorXd mean = x.colwise().mean();
    const double variance = (x.rowwise() - mean).colwise().squaredNorm().mean() / static_cast<double>(x.rows());
    const double tol = config.tolerance * variance;

    std::mt19937_64 rng(config.seed);
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int run = 0; run < std::max(1, config.restarts); ++run) {
        auto r = lloyd(x, plus_plus_seed(x, config.k, rng), config, tol);
        if (r.inertia < best.inertia) { best = std::move(r); }
    }
    return best;
}

}// namespace playstyle::cluster
