#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "sonarblob/errors.hpp"
#include "sonarblob/fft.hpp"
#include "sonarblob/signal.hpp"
#include "sonarblob/simulate.hpp"

using namespace sonarblob;

namespace {

const ChirpSpec kChirp{}; // 7-17 kHz, 10 ms, 96 kHz

double mean_power(const std::vector<double>& x) {
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return acc / static_cast<double>(x.size());
}

} // namespace

TEST_CASE("gen_path step statistics match the configured sigma") {
    const int n = 100001;
    const auto path = gen_path(123, n, 2.0, 0.0, 1e7);
    std::vector<double> steps(static_cast<std::size_t>(n - 1));
    for (int i = 1; i < n; ++i) steps[static_cast<std::size_t>(i - 1)] = path[i] - path[i - 1];
    const double mean = std::accumulate(steps.begin(), steps.end(), 0.0) / steps.size();
    double var = 0.0;
    for (double s : steps) var += (s - mean) * (s - mean);
    var /= static_cast<double>(steps.size());
    CHECK(std::sqrt(var) == doctest::Approx(2.0).epsilon(0.025));
    CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("gen_path respects boundaries and degenerates to a constant") {
    const auto path = gen_path(9, 2000, 5.0, 0.0, 20.0);
    for (double r : path) {
        CHECK(r >= 0.0);
        CHECK(r <= 20.0);
    }
    const auto frozen = gen_path(9, 50, 1e-12, 0.0, 20.0);
    for (double r : frozen) CHECK(r == doctest::Approx(frozen[0]).epsilon(1e-9));
}

TEST_CASE("gen_impulse is unit-norm, bounded, and deterministic") {
    const auto h = gen_impulse(77);
    CHECK(h.size() == 100);
    const double norm = std::sqrt(std::inner_product(h.begin(), h.end(), h.begin(), 0.0));
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(gen_impulse(77) == h);
    CHECK(gen_impulse(78) != h);

    // raw taps are uniform in [-1,1]; the normalizer is sqrt(sum of squares) > max|tap|
    for (double v : h) CHECK(std::abs(v) < 1.0);

    // symmetry about zero over many draws
    double acc = 0.0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        const auto hh = gen_impulse(s);
        acc += std::accumulate(hh.begin(), hh.end(), 0.0);
    }
    CHECK(std::abs(acc / 10000.0) < 0.02);
}

TEST_CASE("scr_scale hits the requested power ratio") {
    Rng rng(3);
    std::vector<double> target(960), clutter(8640);
    for (double& v : target) v = rng.normal(0.0, 0.7);
    for (double& v : clutter) v = rng.normal(0.0, 2e-5);

    for (double scr : {0.0, -9.0, -6.0, 5.0}) {
        const double scale = scr_scale(target, clutter, scr);
        std::vector<double> scaled = target;
        for (double& v : scaled) v *= scale;
        const double measured = 10.0 * std::log10(mean_power(scaled) / mean_power(clutter));
        CHECK(measured == doctest::Approx(scr).epsilon(1e-6));
    }

    // halving the amplitude costs 6.02 dB
    const double s0 = scr_scale(target, clutter, -9.0);
    std::vector<double> halved = target;
    for (double& v : halved) v *= s0 / 2.0;
    const double measured = 10.0 * std::log10(mean_power(halved) / mean_power(clutter));
    CHECK(measured == doctest::Approx(-9.0 - 20.0 * std::log10(2.0)).epsilon(1e-9));

    std::vector<double> silent(100, 0.0);
    CHECK_THROWS_AS(scr_scale(target, silent, 0.0), ParameterError);
}

TEST_CASE("synthetic clutter is band-limited, seeded, and optionally scatterer-free") {
    ClutterParams params;
    params.scatterer_rate_hz = 0.0;
    const auto noise = gen_clutter_synthetic(42, 0.09, kChirp, params);
    CHECK(noise.size() == 8640);
    CHECK(gen_clutter_synthetic(42, 0.09, kChirp, params) == noise);
    CHECK(gen_clutter_synthetic(43, 0.09, kChirp, params) != noise);

    // out-of-band leakage should be tiny relative to in-band power
    double in_band = 0.0, out_band = 0.0;
    const auto spec = fft::rfft(noise, noise.size());
    const double df = kChirp.sample_rate_hz / static_cast<double>(noise.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        const double f = static_cast<double>(k) * df;
        const double power = std::norm(spec[k]);
        if (f >= kChirp.f_min_hz && f <= kChirp.f_max_hz) in_band += power;
        else out_band += power;
    }
    CHECK(in_band > 100.0 * out_band);

    // with a positive density the default segment carries scatterers
    const auto cluttered = gen_clutter_synthetic(42, 0.09, kChirp, ClutterParams{});
    const double peak = *std::max_element(cluttered.begin(), cluttered.end(),
                                          [](double a, double b) {
                                              return std::abs(a) < std::abs(b);
                                          });
    CHECK(std::abs(peak) > 4.0 * ClutterParams{}.noise_floor);
}

TEST_CASE("synth_ping replacement semantics are bit-exact outside the echo window") {
    ScenarioParams params;
    params.n_pings = 4;
    params.scr_db = 0.0;
    const auto scenario = make_scenario(1234, params, kChirp);
    const SyntheticClutter clutter(kChirp, ClutterParams{});

    REQUIRE(scenario.valid_pings.size() == 4); // valid_fraction = 1
    const int ping = scenario.valid_pings[1];
    const auto record = synth_ping(scenario, ping, kChirp, clutter);

    // reproduce the clutter layer this ping started from
    const auto base = synth_ping(Scenario{scenario.seed, [&] {
                                              ScenarioParams p = params;
                                              p.has_target = false;
                                              return p;
                                          }(),
                                          {}, {}, {}},
                                 ping, kChirp, clutter);

    const double range = scenario.path_m[static_cast<std::size_t>(ping - 1)];
    const auto start = static_cast<std::size_t>(
        std::llround(2.0 * range / kChirp.sound_speed_mps * kChirp.sample_rate_hz));
    const std::size_t len = kChirp.length();

    std::size_t mismatches_outside = 0;
    for (std::size_t i = 0; i < record.samples.size(); ++i) {
        const bool inside = i >= start && i < start + len;
        if (!inside && record.samples[i] != base.samples[i]) ++mismatches_outside;
    }
    CHECK(mismatches_outside == 0);

    // the replaced window meets the requested SCR against the clutter layer
    std::vector<double> window(record.samples.begin() + static_cast<std::ptrdiff_t>(start),
                               record.samples.begin() + static_cast<std::ptrdiff_t>(start + len));
    const double measured =
        10.0 * std::log10(mean_power(window) / mean_power(base.samples));
    CHECK(measured == doctest::Approx(0.0).epsilon(0.01));
}

TEST_CASE("valid_fraction controls how many pings carry the echo") {
    ScenarioParams params;
    params.n_pings = 20;
    params.valid_fraction = 0.7;
    const auto scenario = make_scenario(777, params, kChirp);
    CHECK(scenario.valid_pings.size() == 14);

    params.valid_fraction = 0.0;
    const auto none = make_scenario(777, params, kChirp);
    CHECK(none.valid_pings.empty());
    const SyntheticClutter clutter(kChirp, ClutterParams{});
    const auto record = synth_ping(none, 1, kChirp, clutter);

    ScenarioParams clutter_params = params;
    clutter_params.has_target = false;
    const auto pure = synth_ping(make_scenario(777, clutter_params, kChirp), 1, kChirp, clutter);
    CHECK(record.samples == pure.samples);
}

TEST_CASE("closed loop: a delta impulse response puts the MF peak at the delay") {
    ScenarioParams params;
    params.n_pings = 3;
    params.scr_db = 30.0; // strong echo
    Scenario scenario = make_scenario(31415, params, kChirp);
    scenario.impulse.assign(100, 0.0);
    scenario.impulse[0] = 1.0;

    const SyntheticClutter clutter(kChirp, ClutterParams{});
    const auto replica = make_chirp(kChirp);
    for (int ping : scenario.valid_pings) {
        const auto record = synth_ping(scenario, ping, kChirp, clutter);
        const auto mf = matched_filter(record, replica);
        const auto peak = std::max_element(mf.begin(), mf.end()) - mf.begin();
        const auto expected = std::llround(2.0 * scenario.path_m[ping - 1] /
                                           kChirp.sound_speed_mps * kChirp.sample_rate_hz);
        CHECK(std::abs(static_cast<long long>(peak) - expected) <= 1);
    }
}

TEST_CASE("clutter windows show less frequency diversity than target echoes") {
    // the detector's working premise: distorted echoes have lower spectral
    // entropy than in-band-flat clutter
    const SyntheticClutter clutter(kChirp, ClutterParams{});
    const auto replica = make_chirp(kChirp);
    const int bins = 28;

    double clutter_entropy = 0.0, target_entropy = 0.0;
    const int trials = 40;
    for (int t = 0; t < trials; ++t) {
        ScenarioParams params;
        params.n_pings = 1;
        params.scr_db = 0.0;
        const Scenario scenario = make_scenario(9000 + t, params, kChirp);
        const auto record = synth_ping(scenario, 1, kChirp, clutter);
        const double target_range = scenario.path_m[0];
        PingRecord rec = record;
        target_entropy += spectral_entropy(extract_spectrum(rec, target_range, kChirp, bins));

        // a clutter window well away from the echo
        const double clutter_range =
            std::fmod(target_range + 20.0, 55.0);
        clutter_entropy += spectral_entropy(extract_spectrum(rec, clutter_range, kChirp, bins));
    }
    CHECK(target_entropy / trials < clutter_entropy / trials - 0.15);
}

TEST_CASE("scenario construction validates its inputs") {
    ScenarioParams params;
    params.valid_fraction = 1.5;
    CHECK_THROWS_AS(make_scenario(1, params, kChirp), ParameterError);
    params = ScenarioParams{};
    params.segment_s = 0.005; // shorter than the chirp
    CHECK_THROWS_AS(make_scenario(1, params, kChirp), ParameterError);
    params = ScenarioParams{};
    const auto scenario = make_scenario(1, params, kChirp);
    CHECK_THROWS_AS(synth_ping(scenario, 21, kChirp, SyntheticClutter(kChirp, ClutterParams{})),
                    ParameterError);
}
