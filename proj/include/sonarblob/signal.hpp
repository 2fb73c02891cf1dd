#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace sonarblob {

/// Transmitted linear-FM chirp and the medium it travels in.
struct ChirpSpec {
    double f_min_hz = 7000.0;
    double f_max_hz = 17000.0;
    double duration_s = 0.010;
    double sample_rate_hz = 96000.0;
    double sound_speed_mps = 1500.0;

    std::size_t length() const;
    void validate() const; // throws ParameterError
};

/// One emission's received time series.
struct PingRecord {
    int ping = 1; // 1-based index within a block
    double sample_rate_hz = 96000.0;
    std::vector<double> samples;

    double duration_s() const {
        return static_cast<double>(samples.size()) / sample_rate_hz;
    }
};

/// A thresholded detection in range/ping space.
struct EchoPoint {
    double range_m = 0.0;
    int ping = 1;
    double mf_value = 0.0;            // matched-filter magnitude at the peak
    std::vector<double> spectrum;     // normalized in-band power spectrum, sums to 1
    double entropy_bits = 0.0;
};

/// Unit-peak linear sweep from f_min to f_max over the chirp duration.
std::vector<double> make_chirp(const ChirpSpec& spec);

/// Cross-correlation magnitude per lag, normalized by the replica energy so
/// that an echo a*s(t - t0) reads ~a at lag t0*fs. Output length equals the
/// record length; lag k maps to two-way range c*k/(2*fs).
std::vector<double> matched_filter(const PingRecord& ping, const std::vector<double>& replica);

double range_for_lag(std::size_t lag, double sample_rate_hz, double sound_speed_mps);

/// Local maxima of mf_out above eta_mf; peaks whose ranges lie closer than
/// merge_radius_m collapse into the strongest, so one reflector yields one
/// point. A radius of one body size covers the compressed echo's spread.
/// Spectrum/entropy fields are left unfilled.
std::vector<EchoPoint> threshold_detect(const std::vector<double>& mf_out, double eta_mf,
                                        int ping, const ChirpSpec& spec,
                                        double merge_radius_m = 0.6);

/// Normalized power spectrum of the chirp-length window starting at the
/// point's two-way delay, restricted to [f_min, f_max] and binned to `bins`
/// equal-width bins. A window running past the record end is zero-padded and
/// reported through `truncated`.
std::vector<double> extract_spectrum(const PingRecord& ping, double range_m,
                                     const ChirpSpec& spec, int bins,
                                     bool* truncated = nullptr);

/// Shannon entropy -sum z*log2(z) in bits; zero entries contribute zero.
double spectral_entropy(std::span<const double> z);

/// Body-size interval [0.7*c/f_min, 200*c/f_max] for which boundary
/// reflections interfere and produce a frequency-diverse echo.
std::pair<double, double> interference_region(double f_min_hz, double f_max_hz,
                                              double sound_speed_mps);

} // namespace sonarblob
