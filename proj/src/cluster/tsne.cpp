#include "playstyle/cluster/tsne.hpp"

#include <cmath>
#include <fmt/format.h>
#include <random>
#include <stdexcept>

namespace playstyle::cluster {

double fitted_perplexity(Eigen::Index n, double preferred) noexcept
{
    // Strictly below (N - 1) / 3 so that N > 3 * perplexity holds.
    const double limit = (static_cast<double>(n) - 1.0) / 3.0;
    return std::min(preferred, std::max(1.0, std::floor(limit * 10.0) / 10.0 - 0.1));
}

namespace {

    // Row-conditional affinities with the bandwidth found by bisection on the entropy.
    Eigen::MatrixXd affinities(const Eigen::MatrixXd &x, double perplexity)
    {
        const auto n = x.rows();
        Eigen::MatrixXd d2(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) { d2(i, j) = (x.row(i) - x.row(j)).squaredNorm(); }
        }
        const double target = std::log(perplexity);
        Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            double beta = 1.0;
            double lo = 0.0;
            double hi = std::numeric_limits<double>::infinity();
            // Shift by the nearest-neighbour distance for numerical stability.
            double dmin = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j != i) { dmin = std::min(dmin, d2(i, j)); }
            }
            for (int it = 0; it < 200; ++it) {
                double sum = 0.0;
                double weighted = 0.0;
                for (Eigen::Index j = 0; j < n; ++j) {
                    if (j == i) { continue; }
                    const double v = std::exp(-beta * (d2(i, j) - dmin));
                    p(i, j) = v;
                    sum += v;
                    weighted += v * (d2(i, j) - dmin);
                }
                const double h = std::log(sum) + beta * weighted / sum;
                p.row(i) /= sum;
                if (std::abs(h - target) < 1e-10) { break; }
                if (h > target) {
                    lo = beta;
                    beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (beta + hi);
                } else {
                    hi = beta;
                    beta = 0.5 * (beta + lo);
                }
            }
        }
        return p;
    }

}// namespace

Eigen::MatrixXd tsne_project(const Eigen::MatrixXd &x, const TsneConfig &config)
{
    const auto n = x.rows();
    if (config.perplexity <= 0 || static_cast<double>(n) <= 3.0 * config.perplexity) {
        throw std::invalid_argument(fmt::format("tsne: {} points are too few for perplexity {}", n, config.perplexity));
    }
    if (!x.allFinite()) { throw std::invalid_argument("tsne: non-finite input"); }

    Eigen::MatrixXd p = affinities(x, config.perplexity);
    p = (p + p.transpose()).eval() / (2.0 * static_cast<double>(n));
    p = p.cwiseMax(1e-12);
    p.diagonal().setZero();

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> normal(0.0, 1e-4);
    Eigen::MatrixXd y(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i, 0) = normal(rng);
        y(i, 1) = normal(rng);
    }
    Eigen::MatrixXd update = Eigen::MatrixXd::Zero(n, 2);
    Eigen::MatrixXd gains = Eigen::MatrixXd::Ones(n, 2);
    Eigen::MatrixXd num(n, n);
    Eigen::MatrixXd grad(n, 2);

    for (int it = 0; it < config.iterations; ++it) {
        const bool early = it < config.exaggeration_iterations;
        const double exaggeration = early ? config.early_exaggeration : 1.0;
        const double momentum = early ? 0.5 : 0.8;

        double z = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            num(i, i) = 0.0;
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double v = 1.0 / (1.0 + (y.row(i) - y.row(j)).squaredNorm());
                num(i, j) = v;
                num(j, i) = v;
                z += 2.0 * v;
            }
        }
        grad.setZero();
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                if (i == j) { continue; }
                const double q = std::max(num(i, j) / z, 1e-12);
                grad.row(i) += 4.0 * (exaggeration * p(i, j) - q) * num(i, j) * (y.row(i) - y.row(j));
            }
        }
        for (Eigen::Index i = 0; i < n; ++i) {
            for (int d = 0; d < 2; ++d) {
                const bool same_sign = (grad(i, d) > 0) == (update(i, d) > 0);
                gains(i, d) = same_sign ? std::max(gains(i, d) * 0.8, 0.01) : gains(i, d) + 0.2;
                update(i, d) = momentum * update(i, d) - config.learning_rate * gains(i, d) * grad(i, d);
                y(i, d) += update(i, d);
            }
        }
        y.rowwise() -= y.colwise().mean();
    }
    return y;
}

}// namespace playstyle::cluster
