#include "playstyle/cluster/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace playstyle::cluster {

namespace {

    struct Contingency {
        std::vector<std::vector<long>> table;// classes × clusters
        std::vector<long> class_sizes;
        std::vector<long> cluster_sizes;
        long n = 0;
    };

    std::vector<int> dense(const std::vector<int> &ids, int &count)
    {
        std::map<int, int> code;
        for (const int v : ids) { code.emplace(v, 0); }
        int next = 0;
        for (auto &[_, c] : code) { c = next++; }
        count = next;
        std::vector<int> out;
        out.reserve(ids.size());
        for (const int v : ids) { out.push_back(code.at(v)); }
        return out;
    }

    Contingency contingency(const std::vector<int> &labels, const std::vector<int> &assignments)
    {
        int nc = 0;
        int nk = 0;
        const auto c = dense(labels, nc);
        const auto k = dense(assignments, nk);
        Contingency t;
        t.table.assign(static_cast<std::size_t>(nc), std::vector<long>(static_cast<std::size_t>(nk), 0));
        t.class_sizes.assign(static_cast<std::size_t>(nc), 0);
        t.cluster_sizes.assign(static_cast<std::size_t>(nk), 0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            ++t.table[static_cast<std::size_t>(c[i])][static_cast<std::size_t>(k[i])];
            ++t.class_sizes[static_cast<std::size_t>(c[i])];
            ++t.cluster_sizes[static_cast<std::size_t>(k[i])];
        }
        t.n = static_cast<long>(c.size());
        return t;
    }

    double entropy(const std::vector<long> &sizes, long n)
    {
        double h = 0.0;
        for (const long s : sizes) {
            if (s > 0) {
                const double p = static_cast<double>(s) / static_cast<double>(n);
                h -= p * std::log(p);
            }
        }
        return h;
    }

    double comb2(long v) { return static_cast<double>(v) * static_cast<double>(v - 1) / 2.0; }

    // True when every class maps to exactly one cluster and vice versa.
    bool same_partition(const Contingency &t)
    {
        if (t.class_sizes.size() != t.cluster_sizes.size()) { return false; }
        for (const auto &row : t.table) {
            if (std::count_if(row.begin(), row.end(), [](long v) { return v > 0; }) != 1) { return false; }
        }
        return true;
    }

}// namespace

double expected_mutual_information(const std::vector<long> &a, const std::vector<long> &b)
{
    long n = 0;
    for (const long v : a) { n += v; }
    const double nd = static_cast<double>(n);
    const double lg_n = std::lgamma(nd + 1.0);
    double emi = 0.0;
    for (const long ai : a) {
        for (const long bj : b) {
            const long lo = std::max(1L, ai + bj - n);
            const long hi = std::min(ai, bj);
            const double fixed = std::lgamma(static_cast<double>(ai) + 1) + std::lgamma(static_cast<double>(bj) + 1)
                                 + std::lgamma(static_cast<double>(n - ai) + 1) + std::lgamma(static_cast<double>(n - bj) + 1) - lg_n;
            for (long nij = lo; nij <= hi; ++nij) {
                const double v = static_cast<double>(nij);
                const double log_p = fixed - std::lgamma(v + 1) - std::lgamma(static_cast<double>(ai - nij) + 1)
                                     - std::lgamma(static_cast<double>(bj - nij) + 1) - std::lgamma(static_cast<double>(n - ai - bj + nij) + 1);
                emi += v / nd * std::log(nd * v / (static_cast<double>(ai) * static_cast<double>(bj))) * std::exp(log_p);
            }
        }
    }
    return emi;
}

ClusterMetrics clustering_metrics(const std::vector<int> &labels, const std::vector<int> &assignments)
{
    if (labels.size() != assignments.size()) { throw std::invalid_argument("clustering_metrics: labels and assignments differ in length"); }
    if (labels.size() < 2) { throw std::invalid_argument("clustering_metrics: need at least two points"); }
    const auto t = contingency(labels, assignments);
    const double n = static_cast<double>(t.n);

    ClusterMetrics m;
    const double h_c = entropy(t.class_sizes, t.n);
    const double h_k = entropy(t.cluster_sizes, t.n);
    double h_c_given_k = 0.0;
    double h_k_given_c = 0.0;
    double mi = 0.0;
    for (std::size_t i = 0; i < t.class_sizes.size(); ++i) {
        for (std::size_t j = 0; j < t.cluster_sizes.size(); ++j) {
            const double nij = static_cast<double>(t.table[i][j]);
            if (nij == 0) { continue; }
            const double ai = static_cast<double>(t.class_sizes[i]);
            const double bj = static_cast<double>(t.cluster_sizes[j]);
            h_c_given_k -= nij / n * std::log(nij / bj);
            h_k_given_c -= nij / n * std::log(nij / ai);
            mi += nij / n * std::log(n * nij / (ai * bj));
        }
    }
    m.homogeneity = h_c == 0.0 ? 1.0 : 1.0 - h_c_given_k / h_c;
    m.completeness = h_k == 0.0 ? 1.0 : 1.0 - h_k_given_c / h_k;

    // Pair counting: tp = same class & cluster, fp = same cluster only, fn = same class only.
    double sum_ij = 0.0;
    double sum_a = 0.0;
    double sum_b = 0.0;
    for (const auto &row : t.table) {
        for (const long v : row) { sum_ij += comb2(v); }
    }
    for (const long v : t.class_sizes) { sum_a += comb2(v); }
    for (const long v : t.cluster_sizes) { sum_b += comb2(v); }
    const double tp = sum_ij;
    const double fp = sum_b - sum_ij;
    const double fn = sum_a - sum_ij;
    const double tn = comb2(t.n) - tp - fp - fn;
    if (fn == 0.0 && fp == 0.0) {
        m.ari = 1.0;
    } else {
        m.ari = 2.0 * (tp * tn - fn * fp) / ((tp + fn) * (fn + tn) + (tp + fp) * (fp + tn));
    }

    if (same_partition(t)) {
        m.ami = 1.0;
    } else {
        const double emi = expected_mutual_information(t.class_sizes, t.cluster_sizes);
        double denominator = 0.5 * (h_c + h_k) - emi;
        const double eps = std::numeric_limits<double>::epsilon();
        denominator = denominator < 0 ? std::min(denominator, -eps) : std::max(denominator, eps);
        m.ami = (mi - emi) / denominator;
    }
    return m;
}

std::vector<int> encode_labels(const std::vector<std::string> &labels)
{
    std::unordered_map<std::string, int> code;
    std::vector<int> out;
    out.reserve(labels.size());
    for (const auto &l : labels) { out.push_back(code.emplace(l, static_cast<int>(code.size())).first->second); }
    return out;
}

}// namespace playstyle::cluster
