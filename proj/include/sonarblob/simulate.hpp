#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sonarblob/signal.hpp"

namespace sonarblob {

/// Knobs of one synthetic trial.
struct ScenarioParams {
    int n_pings = 20;
    double t_pri_s = 0.7;
    double segment_s = 0.09;
    double sigma_step_m = 2.0;   // random-walk step std
    double scr_db = -9.0;        // signal-to-clutter ratio of the injected echo
    double valid_fraction = 1.0; // fraction of pings carrying a target echo
    bool has_target = true;
    bool additive_target = false; // add the echo instead of replacing the window
};

/// Synthetic clutter: in-band colored Gaussian noise plus sparse point
/// scatterers (chirp replicas with Rayleigh amplitudes at Poisson delays).
/// Scatterer echoes are spectrally flat within the band, so clutter shows
/// low frequency diversity relative to a distorted target echo.
struct ClutterParams {
    double noise_floor = 2e-5;       // std of the band-limited noise
    double scatterer_rate_hz = 55.0; // mean scatterers per second
    double rayleigh_amp = 3e-5;      // Rayleigh sigma of scatterer amplitude
};

/// Source of per-ping clutter segments. Implementations must be pure in
/// (seed, n_samples): the same request reproduces the same samples.
class ClutterBank {
public:
    virtual ~ClutterBank() = default;
    virtual std::vector<double> segment(std::uint64_t seed, std::size_t n_samples) const = 0;
};

class SyntheticClutter final : public ClutterBank {
public:
    SyntheticClutter(const ChirpSpec& chirp, const ClutterParams& params);
    std::vector<double> segment(std::uint64_t seed, std::size_t n_samples) const override;

private:
    ChirpSpec chirp_;
    ClutterParams params_;
    std::vector<double> replica_;
};

/// Recorded clutter; each request slices a random offset of a random file.
class FileClutterBank final : public ClutterBank {
public:
    explicit FileClutterBank(std::vector<std::vector<double>> segments);
    std::vector<double> segment(std::uint64_t seed, std::size_t n_samples) const override;

private:
    std::vector<std::vector<double>> segments_;
};

/// A fully materialized scenario: path, impulse response, valid-ping set.
struct Scenario {
    std::uint64_t seed = 0;
    ScenarioParams params;
    std::vector<double> path_m;    // per-ping target range (ground truth)
    std::vector<double> impulse;   // unit-norm, shared by all pings
    std::vector<int> valid_pings;  // ascending 1-based indices
};

/// Random-walk path: uniform start in [r_min, r_max], Gaussian steps,
/// reflected at the interval bounds.
std::vector<double> gen_path(std::uint64_t seed, int n_pings, double sigma_step_m,
                             double r_min_m, double r_max_m);

/// 100 taps uniform in [-1, 1], scaled to unit Euclidean norm.
std::vector<double> gen_impulse(std::uint64_t seed);

/// Convenience wrapper over SyntheticClutter for a standalone segment.
std::vector<double> gen_clutter_synthetic(std::uint64_t seed, double duration_s,
                                          const ChirpSpec& chirp, const ClutterParams& params);

/// Amplitude scale that sets the mean power of the target window scr_db
/// decibels above/below the mean power of the clutter reference.
double scr_scale(std::span<const double> target_window, std::span<const double> clutter_ref,
                 double scr_db);

Scenario make_scenario(std::uint64_t seed, const ScenarioParams& params, const ChirpSpec& chirp);

/// Clutter everywhere; on a valid ping the chirp-length window starting at
/// the two-way delay is replaced by the scaled distorted echo.
PingRecord synth_ping(const Scenario& scenario, int ping, const ChirpSpec& chirp,
                      const ClutterBank& clutter);

} // namespace sonarblob
