#include "ecgrr/dct_layer.hpp"

#include "ecgrr/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace ecgrr;

TEST_CASE("dct_forward: constant input has only DC") {
    auto layer = dct::DctLayer::make(32, 32);
    std::vector<double> ones(32, 1.0);
    auto coeffs = dct::dct_forward(layer, ones);
    CHECK(coeffs[0] == doctest::Approx(8.0).epsilon(1e-12));
    for (std::size_t k = 1; k < 32; ++k) {
        CHECK(std::abs(coeffs[k]) < 1e-12);
    }

    std::vector<double> zeros(32, 0.0);
    for (double c : dct::dct_forward(layer, zeros)) {
        CHECK(c == 0.0);
    }
}

TEST_CASE("dct_forward matches direct-summation oracle") {
    auto layer = dct::DctLayer::make(32, 8);
    Rng rng(21);
    for (int rep = 0; rep < 10; ++rep) {
        auto x = oracles::random_vector(rng, 32);
        auto got = dct::dct_forward(layer, x);
        auto want = oracles::naive_dct(x, 8);
        for (std::size_t k = 0; k < 8; ++k) {
            CHECK(std::abs(got[k] - want[k]) < 1e-12);
        }
    }
    CHECK_THROWS_AS(dct::dct_forward(layer, std::vector<double>(31, 0.0)), std::invalid_argument);
}

TEST_CASE("scale_coeffs") {
    auto layer = dct::DctLayer::make(32, 8);
    Rng rng(1);
    auto x = oracles::random_vector(rng, 8);

    CHECK(dct::scale_coeffs(layer, x) == x);  // V = 1 is identity

    std::fill(layer.scales.begin(), layer.scales.end(), 0.0);
    for (double v : dct::scale_coeffs(layer, x)) CHECK(v == 0.0);

    std::fill(layer.scales.begin(), layer.scales.end(), 2.0);
    auto doubled = dct::scale_coeffs(layer, std::vector<double>(8, 1.0));
    for (double v : doubled) CHECK(v == 2.0);
}

TEST_CASE("soft_threshold arithmetic") {
    auto layer = dct::DctLayer::make(32, 8);
    std::fill(layer.thresholds.begin(), layer.thresholds.end(), 1.0);
    std::vector<double> in = {2.5, -2.5, 0.5, -0.5, 1.0, -1.0, 0.0, 10.0};
    auto out = dct::soft_threshold(layer, in);
    CHECK(out[0] == doctest::Approx(1.5));
    CHECK(out[1] == doctest::Approx(-1.5));
    CHECK(out[2] == 0.0);
    CHECK(out[3] == 0.0);
    CHECK(out[4] == 0.0);  // exactly at threshold
    CHECK(out[5] == 0.0);
    CHECK(out[6] == 0.0);
    CHECK(out[7] == doctest::Approx(9.0));

    // negative thresholds act as zero, not as expansion
    std::fill(layer.thresholds.begin(), layer.thresholds.end(), -3.0);
    auto passthrough = dct::soft_threshold(layer, in);
    for (std::size_t k = 0; k < 8; ++k) {
        CHECK(passthrough[k] == in[k]);
    }
}

TEST_CASE("idct: DC reconstruction and round trip") {
    auto layer = dct::DctLayer::make(32, 32);
    std::vector<double> dc(32, 0.0);
    dc[0] = 8.0;
    for (double v : dct::idct(layer, dc)) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (double v : dct::idct(layer, std::vector<double>(32, 0.0))) {
        CHECK(v == 0.0);
    }

    Rng rng(9);
    for (int rep = 0; rep < 10; ++rep) {
        auto x = oracles::random_vector(rng, 32);
        auto back = dct::idct(layer, dct::dct_forward(layer, x));
        for (std::size_t i = 0; i < 32; ++i) {
            CHECK(std::abs(back[i] - x[i]) < 1e-10);
        }
    }
}

TEST_CASE("dct_layer_forward composition") {
    Rng rng(31);

    // identity when nothing is truncated, scaled, or thresholded
    auto full = dct::DctLayer::make(32, 32);
    auto x = oracles::random_vector(rng, 32);
    auto [y, cache] = dct::dct_layer_forward(full, x);
    for (std::size_t i = 0; i < 32; ++i) {
        CHECK(std::abs(y[i] - x[i]) < 1e-10);
    }

    // m = 8 is the low-pass reconstruction from the first 8 coefficients
    auto layer = dct::DctLayer::make(32, 8);
    auto [low, c2] = dct::dct_layer_forward(layer, x);
    auto want = oracles::naive_idct(oracles::naive_dct(x, 8), 32);
    for (std::size_t i = 0; i < 32; ++i) {
        CHECK(std::abs(low[i] - want[i]) < 1e-10);
    }

    // huge thresholds kill everything
    std::fill(layer.thresholds.begin(), layer.thresholds.end(), 1e6);
    auto [dead, c3] = dct::dct_layer_forward(layer, x);
    for (double v : dead) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("dct_layer_backward: gradients match finite differences") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        Rng rng(seed * 7);
        auto layer = dct::DctLayer::make(32, 8);
        layer.scales = oracles::random_vector(rng, 8, 0.5, 1.5);
        layer.thresholds = oracles::random_vector(rng, 8, 0.05, 0.3);
        auto x = oracles::random_vector(rng, 32);
        auto r = oracles::random_vector(rng, 32);

        auto [y, cache] = dct::dct_layer_forward(layer, x);

        // skip configurations with a coefficient near the shrinkage kink
        bool near_kink = false;
        for (std::size_t k = 0; k < 8; ++k) {
            if (std::abs(std::abs(cache.scaled[k]) - layer.thresholds[k]) < 1e-4) {
                near_kink = true;
            }
        }
        if (near_kink) continue;

        auto grads = dct::dct_layer_backward(layer, cache, r);

        auto loss_with = [&](const dct::DctLayer& l, std::span<const double> input) {
            auto [out, c] = dct::dct_layer_forward(l, input);
            double acc = 0.0;
            for (std::size_t i = 0; i < out.size(); ++i) acc += out[i] * r[i];
            return acc;
        };

        auto fd_input = oracles::finite_difference(
            [&](std::span<const double> p) { return loss_with(layer, p); }, x);
        CHECK(oracles::max_rel_error(grads.input, fd_input) < 1e-5);

        auto fd_scales = oracles::finite_difference(
            [&](std::span<const double> p) {
                dct::DctLayer l2 = layer;
                l2.scales.assign(p.begin(), p.end());
                return loss_with(l2, x);
            },
            layer.scales);
        CHECK(oracles::max_rel_error(grads.scales, fd_scales) < 1e-5);

        auto fd_thresh = oracles::finite_difference(
            [&](std::span<const double> p) {
                dct::DctLayer l2 = layer;
                l2.thresholds.assign(p.begin(), p.end());
                return loss_with(l2, x);
            },
            layer.thresholds);
        CHECK(oracles::max_rel_error(grads.thresholds, fd_thresh) < 1e-5);
    }
}

TEST_CASE("dct_layer_backward: zero upstream gradient") {
    Rng rng(2);
    auto layer = dct::DctLayer::make(32, 8);
    auto [y, cache] = dct::dct_layer_forward(layer, oracles::random_vector(rng, 32));
    auto grads = dct::dct_layer_backward(layer, cache, std::vector<double>(32, 0.0));
    for (double g : grads.input) CHECK(g == 0.0);
    for (double g : grads.scales) CHECK(g == 0.0);
    for (double g : grads.thresholds) CHECK(g == 0.0);
}

TEST_CASE("dct_layer_backward: input gradient is the transform adjoint") {
    // V = 1, T = 0 so the layer is linear; grad_input must equal B^T * grad_out
    // where B is the explicit idct(dct(.)) matrix.
    Rng rng(13);
    auto layer = dct::DctLayer::make(32, 8);
    auto x = oracles::random_vector(rng, 32);
    auto r = oracles::random_vector(rng, 32);
    auto [y, cache] = dct::dct_layer_forward(layer, x);
    auto grads = dct::dct_layer_backward(layer, cache, r);

    // build B column by column via unit inputs
    std::vector<double> adjoint(32, 0.0);
    for (std::size_t j = 0; j < 32; ++j) {
        std::vector<double> e(32, 0.0);
        e[j] = 1.0;
        auto col = oracles::naive_idct(oracles::naive_dct(e, 8), 32);
        double acc = 0.0;
        for (std::size_t i = 0; i < 32; ++i) acc += col[i] * r[i];
        adjoint[j] = acc;
    }
    for (std::size_t j = 0; j < 32; ++j) {
        CHECK(std::abs(grads.input[j] - adjoint[j]) < 1e-10);
    }
}
