#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sonarblob/signal.hpp"

namespace sonarblob {

/// Weights of the pairwise distance terms plus the physical gates.
struct AffinityParams {
    double alpha = 0.1;       // spectral dissimilarity weight
    double beta = 1.0;        // range-difference weight, per meter
    double tau = 1.0;         // ping-difference weight, per second
    double body_size_m = 0.6; // range differences inside the body go unpenalized
    double v_max_mps = 2.0;   // kills edges whose apparent speed 2*dr/dt exceeds it
    double t_pri_s = 0.7;
    int value_bins = 16;           // joint-histogram discretization for NID
    double skip_threshold = 10.0;  // geometric distance beyond which NID is not computed
    double weight_floor = 1e-6;    // weights below this snap to zero (exact isolation)

    void validate() const;
};

/// Symmetric affinity W plus the derived adjacency, degrees, and normalized
/// Laplacian. Zero-degree nodes use the pseudo-inverse convention
/// (D^-1/2 entry 0), which leaves their Laplacian row as the identity row.
struct AffinityGraph {
    Eigen::MatrixXd weights;   // W, unit diagonal
    Eigen::MatrixXd adjacency; // A = W with zeroed diagonal
    Eigen::VectorXd degree;    // row sums of A
    Eigen::MatrixXd laplacian; // L = I - D^-1/2 A D^-1/2

    int size() const { return static_cast<int>(weights.rows()); }
};

/// Delta_ij = alpha*NID + beta*dr*u(dr - body) + tau*dt, with u(0) = 0.
double pair_distance(const EchoPoint& a, const EchoPoint& b, double nid_ab,
                     const AffinityParams& params);

/// w = exp(-delta) gated by the apparent-speed limit; the edge survives at
/// exactly v_max. Same-ping pairs with dr > 0 are infeasible.
double edge_weight(double delta, double dr_m, double dt_s, double v_max_mps);

/// Full pairwise graph over the point cloud. Two shortcuts, each bounded by
/// a 1e-6 weight perturbation: NID terms whose geometric distance already
/// exceeds skip_threshold are replaced by their upper bound (alpha * 1), and
/// weights below weight_floor become exact zeros, so a negligible link does
/// not keep the normalized Laplacian scale-blindly connected.
AffinityGraph build_graph(const std::vector<EchoPoint>& points, const AffinityParams& params);

/// Derives adjacency, degrees, and Laplacian from a symmetric weight matrix.
AffinityGraph graph_from_weights(Eigen::MatrixXd weights);

} // namespace sonarblob
