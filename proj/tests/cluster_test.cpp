#include <doctest.h>

#include "metric_oracle.hpp"

#include "playstyle/cluster/evaluate.hpp"
#include "playstyle/cluster/pca.hpp"
#include "playstyle/cluster/tsne.hpp"

#include <fmt/format.h>
#include <random>
#include <set>

using namespace playstyle;
using cluster::ClusterMetrics;
using engine::Player;

namespace {

void check_against_oracle(const std::vector<int> &labels, const std::vector<int> &clusters)
{
    const auto got = cluster::clustering_metrics(labels, clusters);
    const auto want = oracle::metrics(labels, clusters);
    const bool ok = std::abs(got.completeness - want.completeness) < 1e-9 && std::abs(got.homogeneity - want.homogeneity) < 1e-9
                    && std::abs(got.ari - want.ari) < 1e-9 && std::abs(got.ami - want.ami) < 1e-9;
    if (!ok) {
        CAPTURE(doctest::toString(labels));
        CAPTURE(doctest::toString(clusters));
        CHECK(got.completeness == doctest::Approx(want.completeness).epsilon(1e-9));
        CHECK(got.homogeneity == doctest::Approx(want.homogeneity).epsilon(1e-9));
        CHECK(got.ari == doctest::Approx(want.ari).epsilon(1e-9));
        CHECK(got.ami == doctest::Approx(want.ami).epsilon(1e-9));
    }
}

Eigen::MatrixXd blobs(const std::vector<Eigen::Vector2d> &centres, int per_blob, double spread, std::uint64_t seed, int dims = 2)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, spread);
    Eigen::MatrixXd x(static_cast<Eigen::Index>(centres.size()) * per_blob, dims);
    for (std::size_t b = 0; b < centres.size(); ++b) {
        for (int i = 0; i < per_blob; ++i) {
            const auto row = static_cast<Eigen::Index>(b) * per_blob + i;
            for (int d = 0; d < dims; ++d) { x(row, d) = (d < 2 ? centres[b](d) : 0.0) + noise(rng); }
        }
    }
    return x;
}

double silhouette(const Eigen::MatrixXd &y, const std::vector<int> &labels)
{
    const auto n = y.rows();
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        std::map<int, std::pair<double, int>> by;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i == j) { continue; }
            auto &[sum, count] = by[labels[static_cast<std::size_t>(j)]];
            sum += (y.row(i) - y.row(j)).norm();
            ++count;
        }
        const auto own = by[labels[static_cast<std::size_t>(i)]];
        const double a = own.first / own.second;
        double b = std::numeric_limits<double>::infinity();
        for (const auto &[l, sc] : by) {
            if (l != labels[static_cast<std::size_t>(i)]) { b = std::min(b, sc.first / sc.second); }
        }
        total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(n);
}

cluster::RowMeta meta(char map, Player side, int slot, const std::string &label, int i)
{
    return { fmt::format("{}.{}", label, i), label, label, map, side, slot, "test" };
}

}// namespace

TEST_CASE("metrics agree with the brute-force oracle on every small partition pair")
{
    for (int n = 2; n <= 5; ++n) {
        oracle::for_each_partition(n, [&](const std::vector<int> &labels) {
            oracle::for_each_partition(n, [&](const std::vector<int> &clusters) { check_against_oracle(labels, clusters); });
        });
    }
    for (int n = 6; n <= 8; ++n) {
        oracle::for_each_shape(n, [&](const std::vector<int> &labels) {
            oracle::for_each_partition(n, [&](const std::vector<int> &clusters) { check_against_oracle(labels, clusters); });
        });
    }
}

TEST_CASE("metric anchors")
{
    const std::vector<int> labels{ 0, 0, 1, 1, 2, 2, 2 };
    const auto same = cluster::clustering_metrics(labels, { 5, 5, 9, 9, 1, 1, 1 });
    CHECK(same.completeness == 1.0);
    CHECK(same.homogeneity == 1.0);
    CHECK(same.ari == 1.0);
    CHECK(same.ami == 1.0);

    const auto one = cluster::clustering_metrics(labels, std::vector<int>(7, 0));
    CHECK(one.completeness == 1.0);
    CHECK(one.homogeneity == 0.0);

    const auto trivial = cluster::clustering_metrics({ 3, 3, 3 }, { 1, 1, 1 });
    CHECK(trivial.completeness == 1.0);
    CHECK(trivial.homogeneity == 1.0);
    CHECK(trivial.ari == 1.0);
    CHECK(trivial.ami == 1.0);

    const std::vector<int> aabb{ 0, 0, 1, 1 };
    const std::vector<int> singletons{ 0, 1, 2, 3 };
    const auto split = cluster::clustering_metrics(aabb, singletons);
    const auto want = oracle::metrics(aabb, singletons);
    CHECK(split.homogeneity == 1.0);
    CHECK(split.completeness == doctest::Approx(want.completeness).epsilon(1e-12));
    CHECK(split.completeness == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(split.ari == doctest::Approx(want.ari).epsilon(1e-12));
    CHECK(split.ami == doctest::Approx(want.ami).epsilon(1e-12));

    // Cluster ids are arbitrary.
    const auto a = cluster::clustering_metrics(labels, { 0, 1, 1, 2, 2, 0, 3 });
    const auto b = cluster::clustering_metrics(labels, { 7, 4, 4, -2, -2, 7, 11 });
    CHECK(a.ami == b.ami);
    CHECK(a.ari == b.ari);

    CHECK_THROWS_AS((void)cluster::clustering_metrics({ 0 }, { 0 }), std::invalid_argument);
    CHECK_THROWS_AS((void)cluster::clustering_metrics({ 0, 1 }, { 0 }), std::invalid_argument);
    CHECK(cluster::encode_labels({ "b", "a", "b" }) == std::vector<int>{ 0, 1, 0 });
}

TEST_CASE("ARI of shuffled labels averages to zero")
{
    std::mt19937_64 rng(1);
    std::vector<int> labels;
    for (int i = 0; i < 100; ++i) { labels.push_back(i % 5); }
    double sum = 0.0;
    for (int t = 0; t < 1000; ++t) {
        auto shuffled = labels;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        sum += cluster::clustering_metrics(labels, shuffled).ari;
    }
    CHECK(std::abs(sum / 1000) < 0.05);
}

TEST_CASE("k-means")
{
    const auto x = blobs({ { 0, 0 }, { 100, 100 } }, 20, 1.0, 3);
    const auto r = cluster::kmeans(x, { 2, 10, 300, 1e-4, 7 });
    for (int i = 0; i < 40; ++i) { CHECK(r.assignments[static_cast<std::size_t>(i)] == r.assignments[static_cast<std::size_t>(i < 20 ? 0 : 20)]); }
    CHECK(r.assignments[0] != r.assignments[20]);
    CHECK(cluster::kmeans(x, { 2, 10, 300, 1e-4, 7 }).assignments == r.assignments);

    const auto small = blobs({ { 0, 0 } }, 9, 1.0, 4);
    const auto each = cluster::kmeans(small, { 9, 3, 300, 1e-4, 1 });
    CHECK(each.inertia == 0.0);
    CHECK(std::set<int>(each.assignments.begin(), each.assignments.end()).size() == 9);

    const auto cloud = blobs({ { 0, 0 }, { 3, 1 }, { 1, 4 } }, 50, 1.5, 5, 6);
    const auto many = cluster::kmeans(cloud, { 7, 1, 300, 0.0, 11 });
    for (std::size_t i = 1; i < many.inertia_history.size(); ++i) { CHECK(many.inertia_history[i] <= many.inertia_history[i - 1] + 1e-9); }
    CHECK(many.inertia_history.size() > 2);

    CHECK_THROWS_AS((void)cluster::kmeans(small, { 10, 1, 300, 1e-4, 0 }), std::invalid_argument);
}

TEST_CASE("PCA")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> normal;
    Eigen::MatrixXd x(200, 100);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        for (Eigen::Index j = 0; j < x.cols(); ++j) { x(i, j) = normal(rng) * (1.0 + 0.05 * static_cast<double>(j)); }
    }
    const auto model = cluster::fit_pca(x, 64);
    REQUIRE(model.components.cols() == 64);
    CHECK((model.components.transpose() * model.components - Eigen::MatrixXd::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-8);
    for (Eigen::Index i = 1; i < 64; ++i) { CHECK(model.eigenvalues(i) <= model.eigenvalues(i - 1)); }

    // Residual variance equals the mean squared reconstruction error (unbiased scaling).
    const Eigen::MatrixXd centred = x.rowwise() - model.mean.transpose();
    const Eigen::MatrixXd back = model.apply(x) * model.components.transpose();
    const double error = (centred - back).squaredNorm() / static_cast<double>(x.rows() - 1);
    CHECK(error == doctest::Approx(model.residual_variance()).epsilon(1e-9));

    // Full-rank 64-D data: the projection is a rotation, so distances survive.
    const Eigen::MatrixXd y = x.leftCols(64);
    const auto full = cluster::fit_pca(y, 63);
    CHECK(full.components.cols() == 63);
    const auto rotated = cluster::fit_pca(x.leftCols(65), 65);
    CHECK(rotated.identity);
    Eigen::MatrixXd wide(200, 80);
    wide << y, Eigen::MatrixXd::Zero(200, 16);
    std::vector<std::string> warnings;
    const auto padded = cluster::fit_pca(wide, 64, &warnings);
    CHECK(warnings.empty());
    const Eigen::MatrixXd p = padded.apply(wide);
    for (int i = 0; i < 20; ++i) {
        for (int j = i + 1; j < 20; ++j) { CHECK((p.row(i) - p.row(j)).norm() == doctest::Approx((y.row(i) - y.row(j)).norm()).epsilon(1e-9)); }
    }

    // Handcrafted 18-D features pass through unchanged.
    cluster::EmbeddingSet hand;
    hand.data = x.leftCols(18);
    for (int i = 0; i < 200; ++i) { hand.meta.push_back(meta('A', Player::p1, 0, "x", i)); }
    CHECK(cluster::pca_reduce(hand, 64).data == hand.data);

    Eigen::MatrixXd low = x.leftCols(10) * Eigen::MatrixXd::Random(10, 100);
    const auto deficient = cluster::fit_pca(low, 64, &warnings);
    CHECK(deficient.components.cols() == 10);
    CHECK(warnings.size() == 1);
}

TEST_CASE("coherent groups")
{
    cluster::EmbeddingSet e;
    e.data = Eigen::MatrixXd::Zero(16, 2);
    int i = 0;
    for (const char map : { 'A', 'B' }) {
        for (const auto side : { Player::p1, Player::p2 }) {
            for (const int slot : { 0, 1 }) {
                e.meta.push_back(meta(map, side, slot, "x", i++));
                e.meta.push_back(meta(map, side, slot, "y", i++));
            }
        }
    }
    const auto starting = cluster::coherent_groups(e, std::vector<int>{ 0 });
    CHECK(starting.size() == 4);
    const auto all = cluster::coherent_groups(e);
    CHECK(all.size() == 8);
    for (const auto &g : all) {
        for (const auto r : g.rows) {
            CHECK(e.meta[r].map == g.key.map);
            CHECK(e.meta[r].side == g.key.side);
            CHECK(e.meta[r].slot == g.key.slot);
        }
    }
    CHECK(cluster::GroupKey::parse("L,p1,0") == cluster::GroupKey{ 'L', Player::p1, 0 });
    CHECK(cluster::GroupKey{ 'B', Player::p2, 3 }.to_string() == "B,p2,3");
    CHECK_THROWS_AS((void)cluster::GroupKey::parse("L,p3,0"), std::invalid_argument);
    CHECK_THROWS_AS((void)cluster::GroupKey::parse("L,p1"), std::invalid_argument);
    CHECK_THROWS_AS((void)cluster::GroupKey::parse("L,p1,x"), std::invalid_argument);
}

TEST_CASE("evaluate_all aggregates per k")
{
    cluster::EmbeddingSet e;
    const std::vector<Eigen::Vector2d> centres{ { 0, 0 }, { 50, 0 }, { 0, 50 } };
    const auto x = blobs(centres, 6, 0.5, 8);
    int i = 0;
    for (const char map : { 'A', 'B', 'L' }) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            e.meta.push_back(meta(map, Player::p1, 0, fmt::format("agent{}", r / 6), i++));
        }
    }
    e.data.resize(54, 2);
    e.data << x, x, x;

    cluster::EvaluationConfig config;
    config.ks = { 3, 20 };
    const auto result = cluster::evaluate_all(e, config);
    CHECK(result.reports.size() == 3);
    CHECK(result.warnings.size() == 3);
    REQUIRE(result.table.size() == 2);
    CHECK(result.table[0].average_groups == 2);
    CHECK(result.table[0].single_groups == 1);
    CHECK(result.table[0].average->ari == doctest::Approx(1.0));
    CHECK(result.table[0].single->homogeneity == doctest::Approx(1.0));
    CHECK(!result.table[1].average.has_value());
    const auto report = cluster::to_json(result, e);
    CHECK(report.at("reports").size() == 3);
    CHECK(report.at("reports")[0].at("samples").size() == 18);
    const auto text = cluster::render_table(result, "blobs");
    CHECK(text.find("Completeness") != std::string::npos);
    CHECK(text.find("  1.000") != std::string::npos);

    const auto only_l = cluster::evaluate_all(e.subset({ 36, 37, 38, 39, 40, 41, 42, 43, 44, 45, 46, 47, 48, 49, 50, 51, 52, 53 }), config);
    CHECK(!only_l.table[0].average.has_value());
    CHECK(only_l.table[0].single.has_value());
    CHECK(cluster::render_table(only_l, "L").find("      -") != std::string::npos);
}

TEST_CASE("t-SNE")
{
    const auto x = blobs({ { 0, 0 }, { 30, 0 }, { 0, 30 } }, 20, 1.0, 12, 10);
    std::vector<int> labels;
    for (int i = 0; i < 60; ++i) { labels.push_back(i / 20); }
    cluster::TsneConfig config;
    config.perplexity = 10;
    config.seed = 4;
    const auto y = cluster::tsne_project(x, config);
    CHECK(y.rows() == 60);
    CHECK(y.cols() == 2);
    CHECK(y.allFinite());
    const double s = silhouette(y, labels);
    MESSAGE("silhouette " << s);
    CHECK(s > 0.5);
    CHECK(cluster::tsne_project(x, config) == y);
    config.perplexity = 30;
    CHECK_THROWS_AS((void)cluster::tsne_project(x, config), std::invalid_argument);
    CHECK(cluster::fitted_perplexity(60) < 20.0);
    CHECK(cluster::fitted_perplexity(1000) == 30.0);
    CHECK(3.0 * cluster::fitted_perplexity(8) < 8.0);
}
