#pragma once

#include <cmath>
#include <vector>

#include "sonarblob/rng.hpp"

namespace testing {

// random point on the probability simplex (normalized exponentials)
inline std::vector<double> random_simplex(sonarblob::Rng& rng, int n) {
    std::vector<double> z(n);
    double total = 0.0;
    for (double& v : z) {
        v = -std::log(1.0 - rng.uniform());
        total += v;
    }
    for (double& v : z) v /= total;
    return z;
}

// direct-summation entropy oracle in bits
inline double entropy_oracle(const std::vector<double>& z) {
    double h = 0.0;
    for (double v : z)
        if (v > 0.0) h -= v * std::log2(v);
    return h;
}

// O(n^2) time-domain correlation oracle, replica-energy normalized
inline std::vector<double> correlation_oracle(const std::vector<double>& y,
                                              const std::vector<double>& s) {
    double energy = 0.0;
    for (double v : s) energy += v * v;
    std::vector<double> out(y.size(), 0.0);
    for (std::size_t k = 0; k < y.size(); ++k) {
        double acc = 0.0;
        for (std::size_t n = 0; n < s.size() && k + n < y.size(); ++n)
            acc += y[k + n] * s[n];
        out[k] = std::abs(acc) / energy;
    }
    return out;
}

} // namespace testing
