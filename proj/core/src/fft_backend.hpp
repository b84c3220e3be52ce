#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace tctv::fft {

// In-place multi-dimensional FFT over the trailing modes (>= 2) of a tensor
// buffer in mode-0-fastest layout. sign = -1 forward, +1 backward
// (unnormalized, FFTW convention e^{sign * 2*pi*i*j*k/n}).
void trailing(std::complex<double>* data, const std::vector<std::int64_t>& dims, int sign);

// In-place FFT over all modes.
void all_modes(std::complex<double>* data, const std::vector<std::int64_t>& dims, int sign);

}  // namespace tctv::fft
