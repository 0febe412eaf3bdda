#include "ecgrr/spectral.hpp"

#include "ecgrr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace ecgrr::spectral {

std::vector<double> hamming_window(std::size_t n) {
    if (n < 2) {
        throw std::invalid_argument("hamming_window: n must be >= 2");
    }
    std::vector<double> w(n);
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        w[i] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom);
    }
    return w;
}

namespace {

double dft_bin_magnitude(std::span<const double> samples, std::size_t k) {
    const std::size_t n = samples.size();
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double phase = omega * static_cast<double>(i);
        re += samples[i] * std::cos(phase);
        im -= samples[i] * std::sin(phase);
    }
    return std::hypot(re, im);
}

} // namespace

std::vector<double> dft_magnitude_serial(std::span<const double> samples, std::size_t k_max) {
    if (samples.empty()) {
        throw std::invalid_argument("dft_magnitude: empty input");
    }
    if (k_max > samples.size()) {
        throw std::invalid_argument("dft_magnitude: k_max exceeds sample count");
    }
    std::vector<double> mag(k_max);
    for (std::size_t k = 0; k < k_max; ++k) {
        mag[k] = dft_bin_magnitude(samples, k);
    }
    return mag;
}

std::vector<double> dft_magnitude(std::span<const double> samples, std::size_t k_max) {
    if (samples.empty()) {
        throw std::invalid_argument("dft_magnitude: empty input");
    }
    if (k_max > samples.size()) {
        throw std::invalid_argument("dft_magnitude: k_max exceeds sample count");
    }
    std::vector<double> mag(k_max);
    // Bins are independent; per-bin arithmetic is identical to the serial path.
#pragma omp parallel for schedule(static)
    for (long long k = 0; k < static_cast<long long>(k_max); ++k) {
        mag[static_cast<std::size_t>(k)] = dft_bin_magnitude(samples, static_cast<std::size_t>(k));
    }
    return mag;
}

Spectrum32 extract_spectrum(const EcgRecord& record) {
    if (record.samples.empty()) {
        throw std::invalid_argument("extract_spectrum: record has no samples");
    }
    const std::size_t n = record.samples.size();
    const double mean =
        std::accumulate(record.samples.begin(), record.samples.end(), 0.0) / static_cast<double>(n);

    const std::vector<double> window = hamming_window(n);
    std::vector<double> windowed(n);
    for (std::size_t i = 0; i < n; ++i) {
        windowed[i] = (record.samples[i] - mean) * window[i];
    }

    std::vector<double> mag = dft_magnitude(windowed, kSpectrumLen);
    mag[0] = 0.0;

    const double peak = *std::max_element(mag.begin(), mag.end());
    if (peak <= 0.0) {
        throw DegenerateInputError("extract_spectrum: zero spectrum after mean removal");
    }

    Spectrum32 out;
    for (std::size_t k = 0; k < kSpectrumLen; ++k) {
        out.mag[k] = mag[k] / peak;
    }
    return out;
}

int dft_peak_rr(const Spectrum32& spectrum, int lo, int hi) {
    if (lo < 1 || hi > static_cast<int>(kSpectrumLen) - 1 || lo > hi) {
        throw std::invalid_argument("dft_peak_rr: invalid search range");
    }
    int best = lo;
    for (int k = lo + 1; k <= hi; ++k) {
        if (spectrum.mag[static_cast<std::size_t>(k)] > spectrum.mag[static_cast<std::size_t>(best)]) {
            best = k;
        }
    }
    return best;
}

} // namespace ecgrr::spectral
