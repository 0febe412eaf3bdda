#pragma once

#include "ecgrr/dct_layer.hpp"
#include "ecgrr/net.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace ecgrr {

enum class Arch { AE, AE_DCT };

std::string arch_name(Arch arch);
Arch arch_from_name(const std::string& name);

// Full estimator: autoencoder, optionally followed by the trainable DCT layer.
// Parameters flatten in a fixed canonical order (layer 0..5 W then b, then DCT
// scales, thresholds) so the optimizer and gradient checks can treat the model
// as one flat vector.
struct Model {
    Arch arch = Arch::AE;
    net::Autoencoder ae;
    dct::DctLayer dct;  // untouched when arch == AE

    static Model seeded(Arch arch, std::uint64_t seed);

    std::size_t param_count() const;
    std::vector<double> flatten_params() const;
    void set_params(std::span<const double> flat);

    struct Forward {
        std::vector<double> output;
        net::ForwardCache ae_cache;
        dct::DctCache dct_cache;
    };

    Forward forward(std::span<const double> x) const;

    // Flat gradient aligned with flatten_params(); grad_input optional.
    std::vector<double> backward(const Forward& fwd, std::span<const double> grad_out,
                                 std::vector<double>* grad_input = nullptr) const;
};

// RR readout: argmax over the 32-entry pseudo-spectrum, ties to lowest index.
int output_peak_bpm(std::span<const double> output);

} // namespace ecgrr
