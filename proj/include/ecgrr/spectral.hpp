#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace ecgrr::spectral {

inline constexpr std::size_t kSpectrumLen = 32;

// One minute of ECG samples plus the ground-truth respiration rate label.
struct EcgRecord {
    std::vector<double> samples;   // millivolts
    double sample_rate_hz = 500.0;
    int true_rr_bpm = 0;           // breaths per minute
};

// Normalized 32-entry DFT magnitude vector; network input.
// After extract_spectrum: entries in [0, 1], max exactly 1, entry 0 forced to 0.
struct Spectrum32 {
    std::array<double, kSpectrumLen> mag{};
};

// Symmetric Hamming window: w[i] = 0.54 - 0.46*cos(2*pi*i/(n-1)).
std::vector<double> hamming_window(std::size_t n);

// |DFT| of the first k_max bins. With a 60 s window, bin k is k cycles/min.
// OpenMP over bins; bit-identical to the serial reference.
std::vector<double> dft_magnitude(std::span<const double> samples, std::size_t k_max);
std::vector<double> dft_magnitude_serial(std::span<const double> samples, std::size_t k_max);

// mean removal -> Hamming window -> |DFT| (32 bins) -> zero DC -> peak-normalize.
Spectrum32 extract_spectrum(const EcgRecord& record);

// argmax over bins [lo, hi], ties to the lowest index. Default range is the
// physiological respiration band.
int dft_peak_rr(const Spectrum32& spectrum, int lo = 10, int hi = 26);

} // namespace ecgrr::spectral
