#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sonarblob::fft {

// Real-to-complex forward transform of length n (x zero-padded/truncated to n).
// Returns n/2 + 1 bins. Thread-safe; plans are cached per size.
std::vector<std::complex<double>> rfft(const std::vector<double>& x, std::size_t n);

// Inverse of rfft, scaled by 1/n. spec must hold n/2 + 1 bins.
std::vector<double> irfft(const std::vector<std::complex<double>>& spec, std::size_t n);

std::size_t next_pow2(std::size_t n);

} // namespace sonarblob::fft
