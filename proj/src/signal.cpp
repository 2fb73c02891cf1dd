#include "sonarblob/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sonarblob/errors.hpp"
#include "sonarblob/fft.hpp"

namespace sonarblob {

std::size_t ChirpSpec::length() const {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

void ChirpSpec::validate() const {
    if (!(f_min_hz > 0.0) || !(f_max_hz > 0.0))
        throw ParameterError("chirp: frequencies must be positive");
    if (!(f_min_hz <= f_max_hz))
        throw ParameterError("chirp: f_min must not exceed f_max");
    if (!(duration_s > 0.0))
        throw ParameterError("chirp: duration must be positive");
    if (!(sample_rate_hz > 2.0 * f_max_hz))
        throw ParameterError("chirp: sample rate below Nyquist for f_max");
    if (!(sound_speed_mps > 0.0))
        throw ParameterError("chirp: sound speed must be positive");
}

std::vector<double> make_chirp(const ChirpSpec& spec) {
    spec.validate();
    const std::size_t n = spec.length();
    const double fs = spec.sample_rate_hz;
    const double sweep_rate = (spec.f_max_hz - spec.f_min_hz) / spec.duration_s;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / fs;
        const double phase = 2.0 * M_PI * (spec.f_min_hz * t + 0.5 * sweep_rate * t * t);
        s[i] = std::cos(phase);
    }
    return s;
}

std::vector<double> matched_filter(const PingRecord& ping, const std::vector<double>& replica) {
    const std::size_t ny = ping.samples.size();
    const std::size_t nr = replica.size();
    if (nr == 0) throw ParameterError("matched_filter: empty replica");
    if (nr >= ny) throw ParameterError("matched_filter: replica longer than record");

    const double energy = std::inner_product(replica.begin(), replica.end(), replica.begin(), 0.0);
    if (!(energy > 0.0)) throw ParameterError("matched_filter: zero-energy replica");

    const std::size_t nfft = fft::next_pow2(ny + nr);
    auto y_spec = fft::rfft(ping.samples, nfft);
    auto s_spec = fft::rfft(replica, nfft);
    for (std::size_t k = 0; k < y_spec.size(); ++k)
        y_spec[k] *= std::conj(s_spec[k]);
    auto corr = fft::irfft(y_spec, nfft);

    std::vector<double> out(ny);
    for (std::size_t k = 0; k < ny; ++k)
        out[k] = std::abs(corr[k]) / energy;
    return out;
}

double range_for_lag(std::size_t lag, double sample_rate_hz, double sound_speed_mps) {
    return sound_speed_mps * (static_cast<double>(lag) / sample_rate_hz) / 2.0;
}

std::vector<EchoPoint> threshold_detect(const std::vector<double>& mf_out, double eta_mf,
                                        int ping, const ChirpSpec& spec,
                                        double merge_radius_m) {
    if (!(eta_mf > 0.0)) throw ParameterError("threshold_detect: eta_mf must be positive");
    if (!(merge_radius_m > 0.0))
        throw ParameterError("threshold_detect: merge radius must be positive");
    const std::size_t n = mf_out.size();
    const auto merge_radius = static_cast<std::size_t>(std::llround(
        2.0 * merge_radius_m / spec.sound_speed_mps * spec.sample_rate_hz));

    // candidate local maxima above threshold
    std::vector<std::size_t> peaks;
    for (std::size_t i = 0; i < n; ++i) {
        if (mf_out[i] < eta_mf) continue;
        const double left = (i > 0) ? mf_out[i - 1] : -1.0;
        const double right = (i + 1 < n) ? mf_out[i + 1] : -1.0;
        if (mf_out[i] > left && mf_out[i] >= right) peaks.push_back(i);
    }

    // strongest-first suppression within one replica length
    std::sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) {
        if (mf_out[a] != mf_out[b]) return mf_out[a] > mf_out[b];
        return a < b;
    });
    std::vector<std::size_t> kept;
    for (std::size_t p : peaks) {
        bool suppressed = false;
        for (std::size_t q : kept) {
            const std::size_t d = (p > q) ? p - q : q - p;
            if (d < merge_radius) { suppressed = true; break; }
        }
        if (!suppressed) kept.push_back(p);
    }
    std::sort(kept.begin(), kept.end());

    std::vector<EchoPoint> points;
    points.reserve(kept.size());
    for (std::size_t p : kept) {
        EchoPoint pt;
        pt.range_m = range_for_lag(p, spec.sample_rate_hz, spec.sound_speed_mps);
        pt.ping = ping;
        pt.mf_value = mf_out[p];
        points.push_back(std::move(pt));
    }
    return points;
}

std::vector<double> extract_spectrum(const PingRecord& ping, double range_m,
                                     const ChirpSpec& spec, int bins, bool* truncated) {
    if (bins < 1) throw ParameterError("extract_spectrum: bins must be >= 1");
    const std::size_t win = spec.length();
    const double fs = ping.sample_rate_hz;
    const auto start = static_cast<std::size_t>(
        std::max<long long>(0, std::llround(2.0 * range_m / spec.sound_speed_mps * fs)));

    std::vector<double> w(win, 0.0);
    bool clipped = false;
    for (std::size_t i = 0; i < win; ++i) {
        const std::size_t idx = start + i;
        if (idx < ping.samples.size()) w[i] = ping.samples[idx];
        else clipped = true;
    }
    if (truncated) *truncated = clipped;

    // window-length DFT: bin spacing 1/T_s, no extra leakage from padding
    auto z = fft::rfft(w, win);
    const double df = fs / static_cast<double>(win);
    const double band = spec.f_max_hz - spec.f_min_hz;

    std::vector<double> out(static_cast<std::size_t>(bins), 0.0);
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double f = static_cast<double>(k) * df;
        if (f < spec.f_min_hz || f > spec.f_max_hz) continue;
        int m = (band > 0.0)
                    ? static_cast<int>((f - spec.f_min_hz) / band * bins)
                    : 0;
        m = std::clamp(m, 0, bins - 1);
        out[static_cast<std::size_t>(m)] += std::norm(z[k]);
    }
    const double total = std::accumulate(out.begin(), out.end(), 0.0);
    if (total > 0.0)
        for (double& v : out) v /= total;
    return out;
}

double spectral_entropy(std::span<const double> z) {
    double h = 0.0;
    for (double v : z) {
        if (v < 0.0) throw ParameterError("spectral_entropy: negative entry");
        if (v > 0.0) h -= v * std::log2(v);
    }
    return h;
}

std::pair<double, double> interference_region(double f_min_hz, double f_max_hz,
                                              double sound_speed_mps) {
    if (!(f_min_hz > 0.0) || !(f_max_hz > 0.0))
        throw ParameterError("interference_region: frequencies must be positive");
    if (!(f_min_hz < f_max_hz))
        throw ParameterError("interference_region: f_min must be below f_max");
    return {0.7 * sound_speed_mps / f_min_hz, 200.0 * sound_speed_mps / f_max_hz};
}

} // namespace sonarblob
