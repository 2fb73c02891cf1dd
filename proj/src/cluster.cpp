#include "sonarblob/cluster.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "sonarblob/errors.hpp"
#include "sonarblob/rng.hpp"

namespace sonarblob {

namespace {

constexpr int kRestarts = 20;
constexpr int kMaxIterations = 300;
constexpr double kInertiaTolerance = 1e-6;

EigenEmbedding embedding_from(const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>& solver,
                              int k) {
    const int n = static_cast<int>(solver.eigenvectors().rows());
    EigenEmbedding e;
    e.eigenvalues = solver.eigenvalues().head(k);
    e.x = solver.eigenvectors().leftCols(k);

    // sign convention: first entry with non-negligible magnitude positive
    for (int c = 0; c < k; ++c) {
        for (int r = 0; r < n; ++r) {
            const double v = e.x(r, c);
            if (std::abs(v) > 1e-12) {
                if (v < 0.0) e.x.col(c) = -e.x.col(c);
                break;
            }
        }
    }

    e.y = e.x;
    for (int r = 0; r < n; ++r) {
        const double norm = e.y.row(r).norm();
        if (norm > 1e-12) {
            e.y.row(r) /= norm;
        } else {
            e.y.row(r).setZero();
            e.y(r, 0) = 1.0;
        }
    }
    return e;
}

} // namespace

Eigen::VectorXd membership_vector(const Clustering& clustering, int cluster) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<int>(clustering.labels.size()));
    for (std::size_t i = 0; i < clustering.labels.size(); ++i)
        if (clustering.labels[i] == cluster) b(static_cast<int>(i)) = 1.0;
    return b;
}

EigenEmbedding spectral_embed(const AffinityGraph& graph, int k) {
    const int n = graph.size();
    if (k < 1 || k > n) throw ParameterError("spectral_embed: k out of range");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(graph.laplacian);
    if (solver.info() != Eigen::Success)
        throw NumericalError("spectral_embed: eigendecomposition failed, n=" +
                             std::to_string(n));
    return embedding_from(solver, k);
}

std::vector<int> kmeans_labels(const Eigen::MatrixXd& rows, int k, std::uint64_t seed) {
    const int n = static_cast<int>(rows.rows());
    if (k < 1 || k > n) throw ParameterError("kmeans: k out of range");
    const int dim = static_cast<int>(rows.cols());

    Rng rng(seed);
    std::vector<int> best_labels;
    double best_inertia = std::numeric_limits<double>::infinity();

    std::vector<int> labels(n);
    std::vector<double> dist2(n);
    Eigen::MatrixXd centers(k, dim);
    Eigen::MatrixXd sums(k, dim);
    std::vector<int> counts(k);

    for (int restart = 0; restart < kRestarts; ++restart) {
        // k-means++ seeding
        centers.row(0) = rows.row(rng.uniform_int(0, n - 1));
        for (int c = 1; c < k; ++c) {
            double total = 0.0;
            for (int i = 0; i < n; ++i) {
                double d = (rows.row(i) - centers.row(0)).squaredNorm();
                for (int p = 1; p < c; ++p)
                    d = std::min(d, (rows.row(i) - centers.row(p)).squaredNorm());
                dist2[i] = d;
                total += d;
            }
            int pick;
            if (total > 0.0) {
                const double target = rng.uniform() * total;
                double acc = 0.0;
                pick = n - 1;
                for (int i = 0; i < n; ++i) {
                    acc += dist2[i];
                    if (acc >= target) { pick = i; break; }
                }
            } else {
                pick = rng.uniform_int(0, n - 1);
            }
            centers.row(c) = rows.row(pick);
        }

        double prev_inertia = std::numeric_limits<double>::infinity();
        double inertia = 0.0;
        for (int iter = 0; iter < kMaxIterations; ++iter) {
            // assignment
            inertia = 0.0;
            for (int i = 0; i < n; ++i) {
                int arg = 0;
                double dmin = (rows.row(i) - centers.row(0)).squaredNorm();
                for (int c = 1; c < k; ++c) {
                    const double d = (rows.row(i) - centers.row(c)).squaredNorm();
                    if (d < dmin) { dmin = d; arg = c; }
                }
                labels[i] = arg;
                inertia += dmin;
            }

            // update; an emptied cluster re-seeds on the farthest point
            sums.setZero();
            std::fill(counts.begin(), counts.end(), 0);
            for (int i = 0; i < n; ++i) {
                sums.row(labels[i]) += rows.row(i);
                ++counts[labels[i]];
            }
            for (int c = 0; c < k; ++c) {
                if (counts[c] > 0) {
                    centers.row(c) = sums.row(c) / counts[c];
                    continue;
                }
                int far = -1;
                double dmax = -1.0;
                for (int i = 0; i < n; ++i) {
                    if (counts[labels[i]] <= 1) continue;
                    const double d = (rows.row(i) - centers.row(labels[i])).squaredNorm();
                    if (d > dmax) { dmax = d; far = i; }
                }
                if (far >= 0) {
                    --counts[labels[far]];
                    sums.row(labels[far]) -= rows.row(far);
                    centers.row(labels[far]) =
                        sums.row(labels[far]) / std::max(1, counts[labels[far]]);
                    labels[far] = c;
                    counts[c] = 1;
                    centers.row(c) = rows.row(far);
                }
            }

            if (std::abs(prev_inertia - inertia) <=
                kInertiaTolerance * std::max(inertia, 1e-30))
                break;
            prev_inertia = inertia;
        }

        if (inertia < best_inertia) {
            best_inertia = inertia;
            best_labels = labels;
        }
    }
    return best_labels;
}

double partition_cost(const AffinityGraph& graph, const Clustering& clustering,
                      double epsilon) {
    if (static_cast<int>(clustering.labels.size()) != graph.size())
        throw ParameterError("partition_cost: clustering does not match graph");
    double total = 0.0;
    for (int c = 0; c < clustering.k; ++c) {
        const Eigen::VectorXd b = membership_vector(clustering, c);
        total += b.dot(graph.laplacian * b);
    }
    return total / clustering.k + epsilon * clustering.k;
}

Clustering select_model_order(const AffinityGraph& graph, int k_max, double epsilon,
                              std::uint64_t seed) {
    const int n = graph.size();
    if (k_max < 1 || k_max > n) throw ParameterError("select_model_order: k_max out of range");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(graph.laplacian);
    if (solver.info() != Eigen::Success)
        throw NumericalError("select_model_order: eigendecomposition failed, n=" +
                             std::to_string(n));

    Clustering best;
    best.cost = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= k_max; ++k) {
        const EigenEmbedding emb = embedding_from(solver, k);
        Clustering cand;
        cand.k = k;
        cand.labels = kmeans_labels(emb.y, k, derive_seed(seed, static_cast<std::uint64_t>(k)));
        cand.cost = partition_cost(graph, cand, epsilon);
        if (cand.cost < best.cost) best = std::move(cand);
    }
    return best;
}

} // namespace sonarblob
