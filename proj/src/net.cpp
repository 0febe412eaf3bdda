#include "ecgrr/net.hpp"

#include "ecgrr/errors.hpp"
#include "ecgrr/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace ecgrr::net {

Autoencoder Autoencoder::seeded(std::uint64_t seed) {
    Autoencoder model;
    Rng rng(seed);
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        LinearLayer& layer = model.layers[l];
        layer.in_dim = kLayerDims[l];
        layer.out_dim = kLayerDims[l + 1];
        layer.weight.resize(layer.out_dim * layer.in_dim);
        layer.bias.assign(layer.out_dim, 0.0);
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.in_dim));
        for (double& w : layer.weight) {
            w = rng.uniform(-bound, bound);
        }
    }
    return model;
}

std::vector<double> linear_forward(const LinearLayer& layer, std::span<const double> x) {
    if (x.size() != layer.in_dim) {
        throw std::invalid_argument("linear_forward: input length does not match in_dim");
    }
    std::vector<double> y(layer.out_dim);
    for (std::size_t r = 0; r < layer.out_dim; ++r) {
        double acc = layer.bias[r];
        const double* row = layer.weight.data() + r * layer.in_dim;
        for (std::size_t c = 0; c < layer.in_dim; ++c) {
            acc += row[c] * x[c];
        }
        y[r] = acc;
    }
    return y;
}

std::vector<double> relu(std::span<const double> x) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = x[i] > 0.0 ? x[i] : 0.0;
    }
    return y;
}

namespace {

// Overflow-stable two-branch form.
double sigmoid_scalar(double v) {
    if (v >= 0.0) {
        return 1.0 / (1.0 + std::exp(-v));
    }
    const double e = std::exp(v);
    return e / (1.0 + e);
}

} // namespace

std::vector<double> sigmoid(std::span<const double> x) {
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        y[i] = sigmoid_scalar(x[i]);
    }
    return y;
}

std::pair<std::vector<double>, ForwardCache> ae_forward(const Autoencoder& model,
                                                        std::span<const double> x) {
    if (x.size() != kLayerDims.front()) {
        throw std::invalid_argument("ae_forward: input length must be 32");
    }
    ForwardCache cache;
    cache.input.assign(x.begin(), x.end());
    std::vector<double> a = cache.input;
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        std::vector<double> z = linear_forward(model.layers[l], a);
        for (double v : z) {
            if (!std::isfinite(v)) {
                throw NumericFailure("ae_forward: non-finite pre-activation at layer " +
                                     std::to_string(l));
            }
        }
        cache.pre[l] = z;
        a = (l + 1 == kNumLayers) ? sigmoid(z) : relu(z);
        cache.post[l] = a;
    }
    return {a, cache};
}

AeGrads ae_backward(const Autoencoder& model, const ForwardCache& cache,
                    std::span<const double> grad_out) {
    if (grad_out.size() != kLayerDims.back()) {
        throw std::invalid_argument("ae_backward: grad_out length must be 32");
    }
    for (std::size_t l = 0; l < kNumLayers; ++l) {
        if (cache.pre[l].size() != model.layers[l].out_dim) {
            throw std::invalid_argument("ae_backward: cache does not match model");
        }
    }

    AeGrads grads;
    std::vector<double> delta(grad_out.begin(), grad_out.end());

    for (std::size_t li = kNumLayers; li-- > 0;) {
        const LinearLayer& layer = model.layers[li];

        // activation derivative on the pre-activation of this layer
        if (li + 1 == kNumLayers) {
            for (std::size_t i = 0; i < delta.size(); ++i) {
                const double s = cache.post[li][i];  // sigmoid(z)
                delta[i] *= s * (1.0 - s);
            }
        } else {
            for (std::size_t i = 0; i < delta.size(); ++i) {
                if (cache.pre[li][i] <= 0.0) {
                    delta[i] = 0.0;
                }
            }
        }

        const std::vector<double>& a_prev = (li == 0) ? cache.input : cache.post[li - 1];
        grads.weight[li].resize(layer.out_dim * layer.in_dim);
        grads.bias[li].resize(layer.out_dim);
        for (std::size_t r = 0; r < layer.out_dim; ++r) {
            grads.bias[li][r] = delta[r];
            double* grow = grads.weight[li].data() + r * layer.in_dim;
            for (std::size_t c = 0; c < layer.in_dim; ++c) {
                grow[c] = delta[r] * a_prev[c];
            }
        }

        // propagate: delta_prev = W^T * delta
        std::vector<double> prev(layer.in_dim, 0.0);
        for (std::size_t r = 0; r < layer.out_dim; ++r) {
            const double* row = layer.weight.data() + r * layer.in_dim;
            for (std::size_t c = 0; c < layer.in_dim; ++c) {
                prev[c] += row[c] * delta[r];
            }
        }
        delta = std::move(prev);
    }

    grads.input = std::move(delta);
    return grads;
}

} // namespace ecgrr::net
