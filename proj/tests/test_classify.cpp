#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "sonarblob/classify.hpp"
#include "sonarblob/errors.hpp"
#include "sonarblob/graph.hpp"

using namespace sonarblob;

namespace {

AffinityGraph random_graph(Rng& rng, int n) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        w(i, i) = 1.0;
        for (int j = i + 1; j < n; ++j) {
            w(i, j) = rng.uniform(0.0, 1.0);
            w(j, i) = w(i, j);
        }
    }
    return graph_from_weights(std::move(w));
}

} // namespace

TEST_CASE("connectivity closed forms") {
    Eigen::MatrixXd w(2, 2);
    w << 1.0, 0.5, 0.5, 1.0;
    const auto g = graph_from_weights(w);
    CHECK(connectivity(g, std::vector<int>{0}) == doctest::Approx(1.0)); // w_ii = e^0
    CHECK(connectivity(g, std::vector<int>{0, 1}) == doctest::Approx(3.0));
}

TEST_CASE("connectivity equals the double-loop pair sum") {
    Rng rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = rng.uniform_int(2, 20);
        const auto g = random_graph(rng, n);
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if (rng.uniform() < 0.5) members.push_back(i);
        if (members.empty()) members.push_back(rng.uniform_int(0, n - 1));

        double oracle = 0.0;
        for (int i : members)
            for (int j : members) oracle += g.weights(i, j);
        CHECK(connectivity(g, members) == doctest::Approx(oracle).epsilon(1e-10));

        // invariant to member ordering
        std::vector<int> shuffled = members;
        std::reverse(shuffled.begin(), shuffled.end());
        CHECK(connectivity(g, shuffled) == connectivity(g, members));
    }
}

TEST_CASE("disjoint cluster connectivities never exceed the total weight mass") {
    Rng rng(62);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = rng.uniform_int(3, 15);
        const auto g = random_graph(rng, n);
        const int k = rng.uniform_int(1, n);
        std::vector<std::vector<int>> clusters(static_cast<std::size_t>(k));
        for (int i = 0; i < n; ++i)
            clusters[static_cast<std::size_t>(rng.uniform_int(0, k - 1))].push_back(i);

        double total = 0.0;
        for (const auto& members : clusters)
            if (!members.empty()) total += connectivity(g, members);
        CHECK(total <= g.weights.sum() + 1e-9);
    }
}

TEST_CASE("median_entropy handles odd, even, and degenerate inputs") {
    CHECK(median_entropy({3.5, 3.5, 3.5}) == 3.5);
    CHECK(median_entropy({1.0, 2.0, 4.0}) == 2.0);
    CHECK(median_entropy({4.0, 1.0}) == doctest::Approx(2.5));
    CHECK_THROWS_AS(median_entropy({}), ParameterError);
}

TEST_CASE("median_entropy matches the sort-based oracle") {
    Rng rng(63);
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = rng.uniform_int(1, 25);
        std::vector<double> values(static_cast<std::size_t>(n));
        for (double& v : values) v = rng.uniform(0.0, 7.0);

        std::vector<double> sorted = values;
        std::sort(sorted.begin(), sorted.end());
        const double oracle = (n % 2 == 1)
                                  ? sorted[static_cast<std::size_t>(n / 2)]
                                  : 0.5 * (sorted[static_cast<std::size_t>(n / 2 - 1)] +
                                           sorted[static_cast<std::size_t>(n / 2)]);
        CHECK(median_entropy(values) == oracle);
    }
}

TEST_CASE("decide requires both strict inequalities") {
    CHECK(decide(5.0, 4.0, 4.0, 4.5) == ClusterLabel::target);
    CHECK(decide(4.0, 4.0, 4.0, 4.5) == ClusterLabel::clutter); // c == eta_c
    CHECK(decide(5.0, 4.5, 4.0, 4.5) == ClusterLabel::clutter); // H == eta_h
    CHECK(decide(3.9, 4.0, 4.0, 4.5) == ClusterLabel::clutter);
    CHECK_THROWS_AS(decide(1.0, 1.0, std::nan(""), 4.5), ParameterError);
}

TEST_CASE("decide is monotone in both features") {
    Rng rng(64);
    for (int trial = 0; trial < 500; ++trial) {
        const double c = rng.uniform(0.0, 10.0);
        const double h = rng.uniform(0.0, 7.0);
        const double eta_c = rng.uniform(0.0, 10.0);
        const double eta_h = rng.uniform(0.0, 7.0);
        if (decide(c, h, eta_c, eta_h) == ClusterLabel::target) {
            CHECK(decide(c + rng.uniform(0.0, 3.0), h, eta_c, eta_h) == ClusterLabel::target);
            CHECK(decide(c, h - rng.uniform(0.0, h), eta_c, eta_h) == ClusterLabel::target);
        }
    }
}

TEST_CASE("calibrate_thresholds quantile behavior") {
    std::vector<std::pair<double, double>> constant(40, {2.5, 4.0});
    const auto [eta_c_const, eta_h_const] = calibrate_thresholds(constant);
    CHECK(eta_c_const == 2.5);
    CHECK(eta_h_const == 4.0);

    Rng rng(65);
    std::vector<std::pair<double, double>> uniform;
    for (int i = 0; i < 20000; ++i) uniform.emplace_back(rng.uniform(), rng.uniform());
    const auto [eta_c, eta_h] = calibrate_thresholds(uniform, 0.05);
    CHECK(eta_c == doctest::Approx(0.95).epsilon(0.02));
    CHECK(eta_h == doctest::Approx(0.05).epsilon(0.2));

    // q = 0.5 degenerates to the medians
    std::vector<std::pair<double, double>> values;
    for (int i = 1; i <= 31; ++i) values.emplace_back(i, 100.0 - i);
    const auto [c_med, h_med] = calibrate_thresholds(values, 0.5);
    CHECK(c_med == 16.0);
    CHECK(h_med == 84.0);

    std::vector<std::pair<double, double>> few(29, {1.0, 1.0});
    CHECK_THROWS_AS(calibrate_thresholds(few), ParameterError);
}

TEST_CASE("build_reports assembles features and labels per cluster") {
    Eigen::MatrixXd w(4, 4);
    w << 1.0, 0.8, 0.0, 0.0, //
        0.8, 1.0, 0.0, 0.0,  //
        0.0, 0.0, 1.0, 0.1,  //
        0.0, 0.0, 0.1, 1.0;
    const auto g = graph_from_weights(w);

    std::vector<EchoPoint> points(4);
    points[0].entropy_bits = 3.0;
    points[1].entropy_bits = 4.0;
    points[2].entropy_bits = 6.0;
    points[3].entropy_bits = 6.5;

    Clustering c;
    c.k = 2;
    c.labels = {0, 0, 1, 1};

    const auto reports = build_reports(g, c, points, 3.0, 4.5);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].connectivity == doctest::Approx(2.0 + 1.6));
    CHECK(reports[0].median_entropy_bits == doctest::Approx(3.5));
    CHECK(reports[0].size == 2);
    CHECK(reports[0].label == ClusterLabel::target);
    CHECK(reports[1].connectivity == doctest::Approx(2.0 + 0.2));
    CHECK(reports[1].label == ClusterLabel::clutter);
    CHECK(reports[1].member_indices == std::vector<int>{2, 3});
}
