#include "ecgrr/dct_layer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ecgrr::dct {

DctLayer DctLayer::make(std::size_t n, std::size_t m) {
    if (m < 1 || m > n) {
        throw std::invalid_argument("DctLayer: require 1 <= m <= n");
    }
    DctLayer layer;
    layer.n = n;
    layer.m = m;
    layer.scales.assign(m, 1.0);
    layer.thresholds.assign(m, 0.0);
    layer.basis.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            layer.basis[i * n + k] =
                std::cos(std::numbers::pi / (2.0 * static_cast<double>(n)) *
                         static_cast<double>(2 * i + 1) * static_cast<double>(k));
        }
    }
    return layer;
}

std::vector<double> dct_forward(const DctLayer& layer, std::span<const double> x) {
    if (x.size() != layer.n) {
        throw std::invalid_argument("dct_forward: input length mismatch");
    }
    const double norm = std::sqrt(2.0 / static_cast<double>(layer.n));
    std::vector<double> coeffs(layer.m);
    for (std::size_t k = 0; k < layer.m; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < layer.n; ++i) {
            acc += x[i] * layer.basis[i * layer.n + k];
        }
        coeffs[k] = norm * acc;
    }
    return coeffs;
}

std::vector<double> scale_coeffs(const DctLayer& layer, std::span<const double> coeffs) {
    if (coeffs.size() != layer.m) {
        throw std::invalid_argument("scale_coeffs: length mismatch");
    }
    std::vector<double> out(layer.m);
    for (std::size_t k = 0; k < layer.m; ++k) {
        out[k] = layer.scales[k] * coeffs[k];
    }
    return out;
}

std::vector<double> soft_threshold(const DctLayer& layer, std::span<const double> scaled) {
    if (scaled.size() != layer.m) {
        throw std::invalid_argument("soft_threshold: length mismatch");
    }
    std::vector<double> out(layer.m);
    for (std::size_t k = 0; k < layer.m; ++k) {
        const double t = layer.thresholds[k] > 0.0 ? layer.thresholds[k] : 0.0;
        const double v = scaled[k];
        const double shrunk = std::abs(v) - t;
        out[k] = shrunk > 0.0 ? (v > 0.0 ? shrunk : -shrunk) : 0.0;
    }
    return out;
}

std::vector<double> idct(const DctLayer& layer, std::span<const double> coeffs) {
    if (coeffs.size() != layer.m) {
        throw std::invalid_argument("idct: length mismatch");
    }
    const double norm = std::sqrt(2.0 / static_cast<double>(layer.n));
    std::vector<double> out(layer.n);
    for (std::size_t i = 0; i < layer.n; ++i) {
        double acc = 0.5 * coeffs[0];
        for (std::size_t k = 1; k < layer.m; ++k) {
            acc += coeffs[k] * layer.basis[i * layer.n + k];
        }
        out[i] = norm * acc;
    }
    return out;
}

std::pair<std::vector<double>, DctCache> dct_layer_forward(const DctLayer& layer,
                                                           std::span<const double> x) {
    DctCache cache;
    cache.input.assign(x.begin(), x.end());
    cache.coeffs = dct_forward(layer, x);
    cache.scaled = scale_coeffs(layer, cache.coeffs);
    cache.thresholded = soft_threshold(layer, cache.scaled);
    std::vector<double> y = idct(layer, cache.thresholded);
    return {std::move(y), std::move(cache)};
}

DctGrads dct_layer_backward(const DctLayer& layer, const DctCache& cache,
                            std::span<const double> grad_out) {
    if (grad_out.size() != layer.n || cache.input.size() != layer.n ||
        cache.coeffs.size() != layer.m) {
        throw std::invalid_argument("dct_layer_backward: cache/grad length mismatch");
    }
    const double norm = std::sqrt(2.0 / static_cast<double>(layer.n));

    // adjoint of idct: d/dXhat_k, with the DC term carrying the 1/2 factor
    std::vector<double> g_hat(layer.m, 0.0);
    for (std::size_t k = 0; k < layer.m; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < layer.n; ++i) {
            const double b = (k == 0) ? 0.5 : layer.basis[i * layer.n + k];
            acc += grad_out[i] * b;
        }
        g_hat[k] = norm * acc;
    }

    DctGrads grads;
    grads.scales.assign(layer.m, 0.0);
    grads.thresholds.assign(layer.m, 0.0);
    std::vector<double> g_coeff(layer.m, 0.0);

    for (std::size_t k = 0; k < layer.m; ++k) {
        const double t_raw = layer.thresholds[k];
        const double t = t_raw > 0.0 ? t_raw : 0.0;
        const double v = cache.scaled[k];
        const bool active = std::abs(v) > t;  // subgradient 0 at the kink
        const double g_scaled = active ? g_hat[k] : 0.0;
        // right-derivative at t_raw == 0 so thresholds can train away from
        // their zero initialization; frozen only while clamped negative
        if (active && t_raw >= 0.0) {
            grads.thresholds[k] = -(v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0)) * g_hat[k];
        }
        grads.scales[k] = g_scaled * cache.coeffs[k];
        g_coeff[k] = g_scaled * layer.scales[k];
    }

    // adjoint of the truncated forward DCT
    grads.input.assign(layer.n, 0.0);
    for (std::size_t i = 0; i < layer.n; ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < layer.m; ++k) {
            acc += g_coeff[k] * layer.basis[i * layer.n + k];
        }
        grads.input[i] = norm * acc;
    }
    return grads;
}

} // namespace ecgrr::dct
