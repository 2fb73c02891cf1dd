#include "sonarblob/infodist.hpp"

#include <algorithm>
#include <cmath>

#include "sonarblob/errors.hpp"

namespace sonarblob {

namespace {

void validate(const SpectrumPair& pair) {
    if (pair.zi.size() != pair.zj.size())
        throw ParameterError("infodist: spectra length mismatch");
    if (pair.zi.empty())
        throw ParameterError("infodist: empty spectra");
    if (pair.value_bins < 2)
        throw ParameterError("infodist: value_bins must be >= 2");
    for (double v : pair.zi)
        if (v < 0.0) throw ParameterError("infodist: negative entry");
    for (double v : pair.zj)
        if (v < 0.0) throw ParameterError("infodist: negative entry");
}

int bin_of(double v, double vmax, int bins) {
    if (!(vmax > 0.0)) return 0;
    const int b = static_cast<int>(v / vmax * bins);
    return std::clamp(b, 0, bins - 1);
}

double entropy_of_counts(std::span<const int> counts, int total) {
    double h = 0.0;
    for (int c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

struct PairEntropies {
    double hi, hj, hij;
};

PairEntropies pair_entropies(const SpectrumPair& pair) {
    validate(pair);
    const int b = pair.value_bins;
    const int m = static_cast<int>(pair.zi.size());
    const double vmax_i = *std::max_element(pair.zi.begin(), pair.zi.end());
    const double vmax_j = *std::max_element(pair.zj.begin(), pair.zj.end());

    std::vector<int> joint(static_cast<std::size_t>(b) * b, 0);
    std::vector<int> marg_i(b, 0), marg_j(b, 0);
    for (int k = 0; k < m; ++k) {
        const int bi = bin_of(pair.zi[k], vmax_i, b);
        const int bj = bin_of(pair.zj[k], vmax_j, b);
        ++joint[static_cast<std::size_t>(bi) * b + bj];
        ++marg_i[bi];
        ++marg_j[bj];
    }
    return {entropy_of_counts(marg_i, m), entropy_of_counts(marg_j, m),
            entropy_of_counts(joint, m)};
}

} // namespace

double binned_entropy(std::span<const double> z, int value_bins) {
    SpectrumPair self{z, z, value_bins};
    return pair_entropies(self).hi;
}

double joint_entropy(const SpectrumPair& pair) {
    return pair_entropies(pair).hij;
}

double mutual_information(const SpectrumPair& pair) {
    const auto e = pair_entropies(pair);
    return e.hi + e.hj - e.hij;
}

double nid(const SpectrumPair& pair) {
    const auto e = pair_entropies(pair);
    const double hmax = std::max(e.hi, e.hj);
    if (!(hmax > 0.0)) return 0.0; // both constant under the histogram
    const double value = 1.0 - (e.hi + e.hj - e.hij) / hmax;
    return std::clamp(value, 0.0, 1.0);
}

} // namespace sonarblob
