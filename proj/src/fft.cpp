#include "sonarblob/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

#include "sonarblob/errors.hpp"

namespace sonarblob::fft {

namespace {

// FFTW's planner is not thread-safe; executing a plan on fresh arrays is.
// Plans are created once per size with FFTW_UNALIGNED so any heap buffer works.
std::mutex g_planner_mutex;

fftw_plan r2c_plan(std::size_t n) {
    static std::map<std::size_t, fftw_plan> cache;
    std::lock_guard lock(g_planner_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<double> in(n);
    std::vector<fftw_complex> out(n / 2 + 1);
    fftw_plan p = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), out.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericalError("fftw r2c plan failed for n=" + std::to_string(n));
    cache.emplace(n, p);
    return p;
}

fftw_plan c2r_plan(std::size_t n) {
    static std::map<std::size_t, fftw_plan> cache;
    std::lock_guard lock(g_planner_mutex);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<fftw_complex> in(n / 2 + 1);
    std::vector<double> out(n);
    fftw_plan p = fftw_plan_dft_c2r_1d(static_cast<int>(n), in.data(), out.data(),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p) throw NumericalError("fftw c2r plan failed for n=" + std::to_string(n));
    cache.emplace(n, p);
    return p;
}

} // namespace

std::vector<std::complex<double>> rfft(const std::vector<double>& x, std::size_t n) {
    if (n == 0) throw ParameterError("rfft: zero length");
    fftw_plan plan = r2c_plan(n);
    std::vector<double> in(n, 0.0);
    const std::size_t m = std::min(n, x.size());
    std::copy(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(m), in.begin());
    std::vector<std::complex<double>> out(n / 2 + 1);
    fftw_execute_dft_r2c(plan, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> irfft(const std::vector<std::complex<double>>& spec, std::size_t n) {
    if (n == 0) throw ParameterError("irfft: zero length");
    if (spec.size() != n / 2 + 1)
        throw ParameterError("irfft: spectrum size does not match n");
    fftw_plan plan = c2r_plan(n);
    std::vector<std::complex<double>> in(spec); // c2r destroys its input
    std::vector<double> out(n);
    fftw_execute_dft_c2r(plan, reinterpret_cast<fftw_complex*>(in.data()), out.data());
    for (double& v : out) v /= static_cast<double>(n);
    return out;
}

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace sonarblob::fft
