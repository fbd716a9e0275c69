#pragma once

#include <complex>
#include <span>

namespace ilw::fft {

/// In-place c2c transforms on length-n buffers, FFTW sign conventions:
/// forward uses e^{-i...}, backward e^{+i...}. No normalization applied.
void forward(std::span<std::complex<double>> data);
void backward(std::span<std::complex<double>> data);

}  // namespace ilw::fft
