#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ecgrr::net {

// y = W*x + b, weight stored row-major (out_dim x in_dim).
struct LinearLayer {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> weight;
    std::vector<double> bias;

    double& w(std::size_t row, std::size_t col) { return weight[row * in_dim + col]; }
    double w(std::size_t row, std::size_t col) const { return weight[row * in_dim + col]; }
};

inline constexpr std::size_t kNumLayers = 6;
inline constexpr std::array<std::size_t, kNumLayers + 1> kLayerDims = {32, 16, 8, 4, 8, 16, 32};

// Fixed 32-16-8-4-8-16-32 stack; ReLU between layers, sigmoid on the output.
struct Autoencoder {
    std::array<LinearLayer, kNumLayers> layers;

    // W uniform in +-1/sqrt(in_dim), b = 0, from a seeded generator.
    static Autoencoder seeded(std::uint64_t seed);
};

// Per-layer pre-activations retained for backprop, plus the input.
struct ForwardCache {
    std::vector<double> input;
    std::array<std::vector<double>, kNumLayers> pre;   // z = W*a + b
    std::array<std::vector<double>, kNumLayers> post;  // activation(z)
};

struct AeGrads {
    std::array<std::vector<double>, kNumLayers> weight;
    std::array<std::vector<double>, kNumLayers> bias;
    std::vector<double> input;  // d loss / d network input
};

std::vector<double> linear_forward(const LinearLayer& layer, std::span<const double> x);
std::vector<double> relu(std::span<const double> x);
std::vector<double> sigmoid(std::span<const double> x);

// Returns the 32-entry output (all entries in (0,1)) and the cache for backprop.
std::pair<std::vector<double>, ForwardCache> ae_forward(const Autoencoder& model,
                                                        std::span<const double> x);

// Exact analytic gradients given d loss / d output. ReLU subgradient at 0 is 0.
AeGrads ae_backward(const Autoencoder& model, const ForwardCache& cache,
                    std::span<const double> grad_out);

} // namespace ecgrr::net
