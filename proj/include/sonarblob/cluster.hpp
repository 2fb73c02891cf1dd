#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sonarblob/graph.hpp"

namespace sonarblob {

/// Partition of N points into k clusters (labels are 0-based).
struct Clustering {
    int k = 0;
    std::vector<int> labels;
    double cost = 0.0; // mean partition cost including the epsilon*k penalty
};

/// Eigenvectors of the Laplacian for the k smallest eigenvalues (x) and
/// their row-normalized form (y).
struct EigenEmbedding {
    Eigen::MatrixXd x;
    Eigen::MatrixXd y;
    Eigen::VectorXd eigenvalues; // the k selected, ascending
};

/// Binary membership vector of cluster k.
Eigen::VectorXd membership_vector(const Clustering& clustering, int cluster);

/// Eigendecomposition of the graph Laplacian, keeping the k smallest
/// eigenvalues. Each eigenvector's first non-negligible entry is made
/// positive; all-zero rows of x normalize to the canonical e_1.
EigenEmbedding spectral_embed(const AffinityGraph& graph, int k);

/// Lloyd's iteration from k-means++ starts: 20 restarts, 300 iterations max,
/// relative inertia tolerance 1e-6, best inertia kept. Deterministic per seed.
std::vector<int> kmeans_labels(const Eigen::MatrixXd& rows, int k, std::uint64_t seed);

/// (1/k) * sum_k b_k' L b_k + epsilon * k.
double partition_cost(const AffinityGraph& graph, const Clustering& clustering, double epsilon);

/// Sweeps k = 1..k_max through embed + k-means, returns the clustering with
/// minimal partition cost; ties break toward smaller k.
Clustering select_model_order(const AffinityGraph& graph, int k_max, double epsilon,
                              std::uint64_t seed);

} // namespace sonarblob
