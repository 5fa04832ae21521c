#pragma once

#include <string>
#include <vector>

namespace playstyle::cluster {

struct ClusterMetrics {
    double completeness = 0.0;
    double homogeneity = 0.0;
    double ari = 0.0;
    double ami = 0.0;
};

/// Ground-truth labels against cluster assignments (ids are arbitrary
/// integers). Conventions: homogeneity is 1 when there is a single label,
/// completeness is 1 when there is a single cluster, and identical partitions
/// (up to relabelling) score 1 on every metric. AMI uses the expected mutual
/// information under the permutation model and the arithmetic-mean normaliser.
/// Throws std::invalid_argument for unequal lengths or fewer than 2 points.
[[nodiscard]] ClusterMetrics clustering_metrics(const std::vector<int> &labels, const std::vector<int> &assignments);

/// Expected mutual information (nats) of two random partitions with the given
/// cluster sizes.
[[nodiscard]] double expected_mutual_information(const std::vector<long> &a, const std::vector<long> &b);

/// Dense integer codes of string labels in order of first appearance.
[[nodiscard]] std::vector<int> encode_labels(const std::vector<std::string> &labels);

}// namespace playstyle::cluster
