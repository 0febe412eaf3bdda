#include "ecgrr/model.hpp"

#include "ecgrr/errors.hpp"

#include <stdexcept>

namespace ecgrr {

std::string arch_name(Arch arch) {
    return arch == Arch::AE ? "ae" : "ae-dct";
}

Arch arch_from_name(const std::string& name) {
    if (name == "ae") return Arch::AE;
    if (name == "ae-dct") return Arch::AE_DCT;
    throw DataError("unknown architecture: " + name);
}

Model Model::seeded(Arch arch, std::uint64_t seed) {
    Model model;
    model.arch = arch;
    model.ae = net::Autoencoder::seeded(seed);
    if (arch == Arch::AE_DCT) {
        model.dct = dct::DctLayer::make(32, 8);
    }
    return model;
}

std::size_t Model::param_count() const {
    std::size_t count = 0;
    for (const auto& layer : ae.layers) {
        count += layer.weight.size() + layer.bias.size();
    }
    if (arch == Arch::AE_DCT) {
        count += dct.scales.size() + dct.thresholds.size();
    }
    return count;
}

std::vector<double> Model::flatten_params() const {
    std::vector<double> flat;
    flat.reserve(param_count());
    for (const auto& layer : ae.layers) {
        flat.insert(flat.end(), layer.weight.begin(), layer.weight.end());
        flat.insert(flat.end(), layer.bias.begin(), layer.bias.end());
    }
    if (arch == Arch::AE_DCT) {
        flat.insert(flat.end(), dct.scales.begin(), dct.scales.end());
        flat.insert(flat.end(), dct.thresholds.begin(), dct.thresholds.end());
    }
    return flat;
}

void Model::set_params(std::span<const double> flat) {
    if (flat.size() != param_count()) {
        throw std::invalid_argument("set_params: flat vector size mismatch");
    }
    std::size_t pos = 0;
    auto take = [&](std::vector<double>& dst) {
        std::copy(flat.begin() + static_cast<std::ptrdiff_t>(pos),
                  flat.begin() + static_cast<std::ptrdiff_t>(pos + dst.size()), dst.begin());
        pos += dst.size();
    };
    for (auto& layer : ae.layers) {
        take(layer.weight);
        take(layer.bias);
    }
    if (arch == Arch::AE_DCT) {
        take(dct.scales);
        take(dct.thresholds);
    }
}

Model::Forward Model::forward(std::span<const double> x) const {
    Forward fwd;
    auto [ae_out, ae_cache] = net::ae_forward(ae, x);
    fwd.ae_cache = std::move(ae_cache);
    if (arch == Arch::AE_DCT) {
        auto [out, cache] = dct::dct_layer_forward(dct, ae_out);
        fwd.output = std::move(out);
        fwd.dct_cache = std::move(cache);
    } else {
        fwd.output = std::move(ae_out);
    }
    return fwd;
}

std::vector<double> Model::backward(const Forward& fwd, std::span<const double> grad_out,
                                    std::vector<double>* grad_input) const {
    std::vector<double> flat;
    flat.reserve(param_count());

    dct::DctGrads dct_grads;
    std::span<const double> ae_grad_out = grad_out;
    if (arch == Arch::AE_DCT) {
        dct_grads = dct::dct_layer_backward(dct, fwd.dct_cache, grad_out);
        ae_grad_out = dct_grads.input;
    }
    net::AeGrads ae_grads = net::ae_backward(ae, fwd.ae_cache, ae_grad_out);

    for (std::size_t l = 0; l < net::kNumLayers; ++l) {
        flat.insert(flat.end(), ae_grads.weight[l].begin(), ae_grads.weight[l].end());
        flat.insert(flat.end(), ae_grads.bias[l].begin(), ae_grads.bias[l].end());
    }
    if (arch == Arch::AE_DCT) {
        flat.insert(flat.end(), dct_grads.scales.begin(), dct_grads.scales.end());
        flat.insert(flat.end(), dct_grads.thresholds.begin(), dct_grads.thresholds.end());
    }
    if (grad_input != nullptr) {
        *grad_input = std::move(ae_grads.input);
    }
    return flat;
}

int output_peak_bpm(std::span<const double> output) {
    if (output.empty()) {
        throw std::invalid_argument("output_peak_bpm: empty output");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < output.size(); ++i) {
        if (output[i] > output[best]) {
            best = i;
        }
    }
    return static_cast<int>(best);
}

} // namespace ecgrr
