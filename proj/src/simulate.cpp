#include "sonarblob/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sonarblob/errors.hpp"
#include "sonarblob/fft.hpp"
#include "sonarblob/rng.hpp"

namespace sonarblob {

namespace {

// sub-stream tags for per-scenario seed derivation
enum : std::uint64_t { kStreamPath = 1, kStreamImpulse = 2, kStreamValid = 3, kStreamClutter = 4 };

double reflect_into(double x, double lo, double hi) {
    const double span = hi - lo;
    if (!(span > 0.0)) return lo;
    double t = std::fmod(x - lo, 2.0 * span);
    if (t < 0.0) t += 2.0 * span;
    return lo + (t <= span ? t : 2.0 * span - t);
}

double mean_power(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc / static_cast<double>(x.size());
}

} // namespace

SyntheticClutter::SyntheticClutter(const ChirpSpec& chirp, const ClutterParams& params)
    : chirp_(chirp), params_(params), replica_(make_chirp(chirp)) {}

std::vector<double> SyntheticClutter::segment(std::uint64_t seed, std::size_t n_samples) const {
    if (n_samples == 0) throw ParameterError("clutter: zero-length segment");
    Rng rng(seed);

    // band-limited Gaussian noise via spectral masking
    std::vector<double> white(n_samples);
    for (double& v : white) v = rng.normal();
    auto spec = fft::rfft(white, n_samples);
    const double df = chirp_.sample_rate_hz / static_cast<double>(n_samples);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double f = static_cast<double>(k) * df;
        if (f < chirp_.f_min_hz || f > chirp_.f_max_hz) spec[k] = 0.0;
    }
    auto noise = fft::irfft(spec, n_samples);
    const double rms = std::sqrt(mean_power(noise));
    const double gain = rms > 0.0 ? params_.noise_floor / rms : 0.0;
    for (double& v : noise) v *= gain;

    // sparse point scatterers
    const double duration = static_cast<double>(n_samples) / chirp_.sample_rate_hz;
    const int count = rng.poisson(params_.scatterer_rate_hz * duration);
    for (int s = 0; s < count; ++s) {
        const auto delay = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n_samples));
        const double amp = rng.rayleigh(params_.rayleigh_amp);
        for (std::size_t i = 0; i < replica_.size() && delay + i < n_samples; ++i)
            noise[delay + i] += amp * replica_[i];
    }
    return noise;
}

FileClutterBank::FileClutterBank(std::vector<std::vector<double>> segments)
    : segments_(std::move(segments)) {
    if (segments_.empty()) throw ParameterError("clutter bank: no segments");
}

std::vector<double> FileClutterBank::segment(std::uint64_t seed, std::size_t n_samples) const {
    Rng rng(seed);
    const auto& src = segments_[rng.uniform_int(0, static_cast<int>(segments_.size()) - 1)];
    if (src.size() < n_samples)
        throw ParameterError("clutter bank: segment shorter than one ping");
    const auto max_off = static_cast<int>(src.size() - n_samples);
    const auto off = static_cast<std::size_t>(max_off > 0 ? rng.uniform_int(0, max_off) : 0);
    return {src.begin() + static_cast<std::ptrdiff_t>(off),
            src.begin() + static_cast<std::ptrdiff_t>(off + n_samples)};
}

std::vector<double> gen_path(std::uint64_t seed, int n_pings, double sigma_step_m,
                             double r_min_m, double r_max_m) {
    if (n_pings < 1) throw ParameterError("gen_path: need at least one ping");
    if (!(sigma_step_m >= 0.0)) throw ParameterError("gen_path: sigma must be nonnegative");
    if (!(r_max_m > r_min_m)) throw ParameterError("gen_path: empty range interval");
    Rng rng(seed);
    std::vector<double> path(n_pings);
    path[0] = rng.uniform(r_min_m, r_max_m);
    for (int m = 1; m < n_pings; ++m)
        path[m] = reflect_into(path[m - 1] + rng.normal(0.0, sigma_step_m), r_min_m, r_max_m);
    return path;
}

std::vector<double> gen_impulse(std::uint64_t seed) {
    constexpr int kTaps = 100;
    Rng rng(seed);
    std::vector<double> h(kTaps);
    for (double& v : h) v = rng.uniform(-1.0, 1.0);
    const double norm = std::sqrt(std::inner_product(h.begin(), h.end(), h.begin(), 0.0));
    for (double& v : h) v /= norm;
    return h;
}

std::vector<double> gen_clutter_synthetic(std::uint64_t seed, double duration_s,
                                          const ChirpSpec& chirp, const ClutterParams& params) {
    if (!(duration_s > 0.0)) throw ParameterError("gen_clutter: duration must be positive");
    SyntheticClutter bank(chirp, params);
    return bank.segment(seed, static_cast<std::size_t>(std::llround(duration_s * chirp.sample_rate_hz)));
}

double scr_scale(std::span<const double> target_window, std::span<const double> clutter_ref,
                 double scr_db) {
    if (clutter_ref.empty()) throw ParameterError("scr_scale: empty clutter reference");
    const double p_clutter = mean_power(clutter_ref);
    if (!(p_clutter > 0.0)) throw ParameterError("scr_scale: zero clutter power");
    const double p_target = mean_power(target_window);
    if (!(p_target > 0.0)) throw ParameterError("scr_scale: zero target power");
    return std::sqrt(p_clutter * std::pow(10.0, scr_db / 10.0) / p_target);
}

Scenario make_scenario(std::uint64_t seed, const ScenarioParams& params, const ChirpSpec& chirp) {
    if (params.n_pings < 1) throw ParameterError("scenario: need at least one ping");
    if (params.valid_fraction < 0.0 || params.valid_fraction > 1.0)
        throw ParameterError("scenario: valid_fraction out of [0, 1]");
    if (!(params.segment_s > chirp.duration_s))
        throw ParameterError("scenario: segment shorter than the chirp");

    Scenario s;
    s.seed = seed;
    s.params = params;
    if (params.has_target) {
        // keep the full echo window inside the record
        const double r_max =
            (params.segment_s - chirp.duration_s) * chirp.sound_speed_mps / 2.0 * 0.98;
        s.path_m = gen_path(derive_seed(seed, kStreamPath), params.n_pings,
                            params.sigma_step_m, 0.0, r_max);
        s.impulse = gen_impulse(derive_seed(seed, kStreamImpulse));
        const int n_valid =
            static_cast<int>(std::llround(params.valid_fraction * params.n_pings));
        Rng rng(derive_seed(seed, kStreamValid));
        for (int idx : rng.sample_without_replacement(params.n_pings, n_valid))
            s.valid_pings.push_back(idx + 1);
    }
    return s;
}

PingRecord synth_ping(const Scenario& scenario, int ping, const ChirpSpec& chirp,
                      const ClutterBank& clutter) {
    if (ping < 1 || ping > scenario.params.n_pings)
        throw ParameterError("synth_ping: ping index out of range");
    const auto n_samples = static_cast<std::size_t>(
        std::llround(scenario.params.segment_s * chirp.sample_rate_hz));

    PingRecord record;
    record.ping = ping;
    record.sample_rate_hz = chirp.sample_rate_hz;
    record.samples = clutter.segment(
        derive_seed(scenario.seed, kStreamClutter, static_cast<std::uint64_t>(ping)), n_samples);

    const bool valid = scenario.params.has_target &&
                       std::binary_search(scenario.valid_pings.begin(),
                                          scenario.valid_pings.end(), ping);
    if (!valid) return record;

    const std::vector<double> s = make_chirp(chirp);
    std::vector<double> echo(chirp.length(), 0.0);
    for (std::size_t i = 0; i < echo.size(); ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < scenario.impulse.size() && j <= i; ++j) {
            const std::size_t si = i - j;
            if (si < s.size()) acc += scenario.impulse[j] * s[si];
        }
        echo[i] = acc;
    }

    const double scale = scr_scale(echo, record.samples, scenario.params.scr_db);
    const double range = scenario.path_m[static_cast<std::size_t>(ping - 1)];
    const double t_m = 2.0 * range / chirp.sound_speed_mps;
    const auto start = static_cast<std::size_t>(std::llround(t_m * chirp.sample_rate_hz));
    for (std::size_t i = 0; i < echo.size() && start + i < record.samples.size(); ++i) {
        if (scenario.params.additive_target)
            record.samples[start + i] += scale * echo[i];
        else
            record.samples[start + i] = scale * echo[i];
    }
    return record;
}

} // namespace sonarblob
