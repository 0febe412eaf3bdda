#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ecgrr::dct {

// Trainable transform layer: truncated type-II DCT, per-coefficient scaling,
// soft-thresholding, 32-point inverse DCT. Scales and thresholds are learned.
struct DctLayer {
    std::size_t n = 32;              // input/output length
    std::size_t m = 8;               // retained coefficients
    std::vector<double> scales;      // length m, init 1
    std::vector<double> thresholds;  // length m, init 0
    std::vector<double> basis;       // n x n, basis[i*n + k] = cos[(pi/2n)(2i+1)k]

    static DctLayer make(std::size_t n, std::size_t m);
};

struct DctCache {
    std::vector<double> input;        // length n
    std::vector<double> coeffs;       // X_k, length m
    std::vector<double> scaled;       // V_k * X_k
    std::vector<double> thresholded;  // after shrinkage
};

struct DctGrads {
    std::vector<double> input;       // length n
    std::vector<double> scales;      // length m
    std::vector<double> thresholds;  // length m
};

// X_k = sqrt(2/N) * sum_i x_i cos[(pi/2N)(2i+1)k], k < m.
std::vector<double> dct_forward(const DctLayer& layer, std::span<const double> x);

std::vector<double> scale_coeffs(const DctLayer& layer, std::span<const double> coeffs);

// sign(x)*(|x| - max(T,0))_+ per entry; negative thresholds act as 0.
std::vector<double> soft_threshold(const DctLayer& layer, std::span<const double> scaled);

// x_i = sqrt(2/N) * (X_0/2 + sum_{k>=1} X_k cos[(pi/2N)(2i+1)k]).
std::vector<double> idct(const DctLayer& layer, std::span<const double> coeffs);

std::pair<std::vector<double>, DctCache> dct_layer_forward(const DctLayer& layer,
                                                           std::span<const double> x);

DctGrads dct_layer_backward(const DctLayer& layer, const DctCache& cache,
                            std::span<const double> grad_out);

} // namespace ecgrr::dct
