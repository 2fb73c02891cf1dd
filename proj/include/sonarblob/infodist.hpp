#pragma once

#include <span>
#include <vector>

namespace sonarblob {

/// Two same-length spectra plus the value-discretization used for their
/// joint statistics.
struct SpectrumPair {
    std::span<const double> zi;
    std::span<const double> zj;
    int value_bins = 16;
};

/// Entropy of the B-bin equal-width value histogram of z over [0, max(z)].
/// This is the marginal used inside mutual_information and nid; it is not
/// the spectral entropy of the full-resolution spectrum.
double binned_entropy(std::span<const double> z, int value_bins);

/// Joint entropy of the per-bin value pairs (zi[m], zj[m]), each axis
/// discretized into value_bins equal-width bins over [0, max of that axis].
double joint_entropy(const SpectrumPair& pair);

/// I = H_i + H_j - H_ij with all three terms on the same value histogram,
/// which keeps I >= 0.
double mutual_information(const SpectrumPair& pair);

/// Normalized information distance 1 - I / max(H_i, H_j) in [0, 1].
/// A pair whose histogram entropies are both zero is maximally similar and
/// maps to 0.
double nid(const SpectrumPair& pair);

} // namespace sonarblob
