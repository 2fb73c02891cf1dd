#include "sonarblob/graph.hpp"

#include <cmath>

#include "sonarblob/errors.hpp"
#include "sonarblob/infodist.hpp"

namespace sonarblob {

void AffinityParams::validate() const {
    if (alpha < 0.0 || beta < 0.0 || tau < 0.0 || body_size_m < 0.0)
        throw ParameterError("affinity: weights and body size must be nonnegative");
    if (!(v_max_mps > 0.0)) throw ParameterError("affinity: v_max must be positive");
    if (!(t_pri_s > 0.0)) throw ParameterError("affinity: t_pri must be positive");
    if (value_bins < 2) throw ParameterError("affinity: value_bins must be >= 2");
    if (weight_floor < 0.0 || weight_floor > 1e-6)
        throw ParameterError("affinity: weight_floor must be in [0, 1e-6]");
}

namespace {

inline double step_pos(double x) { return x > 0.0 ? 1.0 : 0.0; } // u(0) = 0

} // namespace

double pair_distance(const EchoPoint& a, const EchoPoint& b, double nid_ab,
                     const AffinityParams& params) {
    const double dr = std::abs(a.range_m - b.range_m);
    const double dt = std::abs(a.ping - b.ping) * params.t_pri_s;
    return params.alpha * nid_ab + params.beta * dr * step_pos(dr - params.body_size_m) +
           params.tau * dt;
}

double edge_weight(double delta, double dr_m, double dt_s, double v_max_mps) {
    if (dt_s == 0.0) {
        if (dr_m > 0.0) return 0.0; // simultaneous echoes cannot be one object
        return std::exp(-delta);
    }
    if (2.0 * dr_m / dt_s > v_max_mps) return 0.0;
    return std::exp(-delta);
}

AffinityGraph build_graph(const std::vector<EchoPoint>& points, const AffinityParams& params) {
    params.validate();
    const int n = static_cast<int>(points.size());
    if (n < 2) throw ParameterError("build_graph: need at least 2 points");

    // Replacing NID by its upper bound perturbs the weight by at most
    // exp(-geom) * (1 - exp(-alpha)); the skip stays below this cap.
    constexpr double kMaxSkipError = 1e-6;
    const double alpha_span = 1.0 - std::exp(-params.alpha);

    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        weights(i, i) = 1.0; // zero self-distance
        for (int j = i + 1; j < n; ++j) {
            const auto& a = points[i];
            const auto& b = points[j];
            const double dr = std::abs(a.range_m - b.range_m);
            const double dt = std::abs(a.ping - b.ping) * params.t_pri_s;

            double w = 0.0;
            const bool gated = (dt == 0.0) ? (dr > 0.0) : (2.0 * dr / dt > params.v_max_mps);
            if (!gated) {
                const double geom =
                    params.beta * dr * step_pos(dr - params.body_size_m) + params.tau * dt;
                const bool skip = geom > params.skip_threshold &&
                                  std::exp(-geom) * alpha_span <= kMaxSkipError;
                double nid_term = 1.0;
                if (params.alpha > 0.0 && !skip) {
                    SpectrumPair pair{a.spectrum, b.spectrum, params.value_bins};
                    nid_term = nid(pair);
                }
                w = std::exp(-(params.alpha * nid_term + geom));
                if (w < params.weight_floor) w = 0.0;
            }
            weights(i, j) = w;
            weights(j, i) = w;
        }
    }
    return graph_from_weights(std::move(weights));
}

AffinityGraph graph_from_weights(Eigen::MatrixXd weights) {
    const int n = static_cast<int>(weights.rows());
    if (n < 1 || weights.cols() != n)
        throw ParameterError("graph_from_weights: weight matrix must be square");

    AffinityGraph g;
    g.weights = std::move(weights);
    g.adjacency = g.weights;
    g.adjacency.diagonal().setZero();
    g.degree = g.adjacency.rowwise().sum();

    Eigen::VectorXd inv_sqrt(n);
    for (int i = 0; i < n; ++i)
        inv_sqrt(i) = g.degree(i) > 0.0 ? 1.0 / std::sqrt(g.degree(i)) : 0.0;

    g.laplacian = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double v = -inv_sqrt(i) * g.adjacency(i, j) * inv_sqrt(j);
            g.laplacian(i, j) = v;
            g.laplacian(j, i) = v;
        }
    }
    return g;
}

} // namespace sonarblob
