#include "ecgrr/training.hpp"

#include "ecgrr/datagen.hpp"
#include "ecgrr/errors.hpp"
#include "ecgrr/harness.hpp"
#include "ecgrr/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace ecgrr;

TEST_CASE("gaussian_target values") {
    auto g = training::gaussian_target({19.0, 2.0});
    CHECK(g[19] == 1.0);
    CHECK(g[17] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(g[21] == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    auto g13 = training::gaussian_target({13.0, 2.0});
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < 32; ++i) {
        if (g13[i] > g13[argmax]) argmax = i;
    }
    CHECK(argmax == 13);
}

TEST_CASE("mse_loss") {
    std::vector<double> target = {0.1, 0.4, 0.9};
    auto zero = training::mse_loss(target, target);
    CHECK(zero.loss == 0.0);
    for (double g : zero.grad) CHECK(g == 0.0);

    std::vector<double> shifted = {1.1, 1.4, 1.9};
    CHECK(training::mse_loss(shifted, target).loss == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(training::mse_loss(shifted, std::vector<double>{1.0}), std::invalid_argument);

    // gradient vs finite differences
    Rng rng(8);
    auto pred = oracles::random_vector(rng, 16);
    auto tgt = oracles::random_vector(rng, 16);
    auto analytic = training::mse_loss(pred, tgt);
    auto fd = oracles::finite_difference(
        [&](std::span<const double> p) {
            return training::mse_loss(std::vector<double>(p.begin(), p.end()), tgt).loss;
        },
        pred, 1e-6);
    for (std::size_t i = 0; i < 16; ++i) {
        CHECK(std::abs(analytic.grad[i] - fd[i]) < 1e-7);
    }
}

TEST_CASE("adamw first step matches the hand-computed update") {
    training::TrainConfig cfg;
    cfg.weight_decay = 0.0;
    training::AdamW opt(1);
    std::vector<double> params = {0.0};
    opt.step(params, std::vector<double>{1.0}, cfg);
    // m_hat = 1, v_hat = 1 -> delta = -lr / (1 + eps)
    CHECK(params[0] == doctest::Approx(-0.001 / (1.0 + 1e-8)).epsilon(1e-12));
    CHECK(params[0] == doctest::Approx(-0.00099999999).epsilon(1e-9));
}

TEST_CASE("adamw: zero gradients and zero decay leave parameters unchanged") {
    training::TrainConfig cfg;
    cfg.weight_decay = 0.0;
    training::AdamW opt(3);
    std::vector<double> params = {1.0, -2.0, 0.5};
    const auto before = params;
    for (int i = 0; i < 10; ++i) {
        opt.step(params, std::vector<double>(3, 0.0), cfg);
    }
    CHECK(params == before);
}

TEST_CASE("adamw determinism") {
    training::TrainConfig cfg;
    Rng rng(44);
    auto grads = oracles::random_vector(rng, 8);
    std::vector<double> a(8, 0.3), b(8, 0.3);
    training::AdamW opt_a(8), opt_b(8);
    for (int i = 0; i < 25; ++i) {
        opt_a.step(a, grads, cfg);
        opt_b.step(b, grads, cfg);
    }
    CHECK(a == b);  // bit-identical
}

namespace {

std::vector<training::Sample> tiny_samples(std::uint64_t seed, std::size_t n) {
    Rng rng(seed);
    std::vector<training::Sample> samples(n);
    for (auto& s : samples) {
        const int rr = rng.uniform_int(10, 26);
        s.true_rr_bpm = rr;
        s.target = training::gaussian_target({static_cast<double>(rr), 2.0});
        // noisy spectrum peaked at the label
        for (std::size_t k = 0; k < 32; ++k) {
            const double d = static_cast<double>(k) - static_cast<double>(rr);
            s.x.mag[k] = std::exp(-d * d / 8.0) + 0.1 * rng.uniform();
        }
        s.x.mag[0] = 0.0;
    }
    return samples;
}

} // namespace

TEST_CASE("train: epochs=1 keeps the epoch-1 model") {
    auto train_set = tiny_samples(1, 12);
    auto test_set = tiny_samples(2, 6);
    training::TrainConfig cfg;
    cfg.epochs = 1;
    auto result = training::train(train_set, test_set, cfg);
    CHECK(result.best_epoch == 1);
    CHECK(result.history.size() == 1);
}

TEST_CASE("train: loss decreases and runs are reproducible") {
    auto train_set = tiny_samples(3, 16);
    auto test_set = tiny_samples(4, 8);
    training::TrainConfig cfg;
    cfg.epochs = 200;

    auto r1 = training::train(train_set, test_set, cfg);
    auto r2 = training::train(train_set, test_set, cfg);

    CHECK(r1.history.back().train_loss < r1.history.front().train_loss);
    REQUIRE(r1.history.size() == r2.history.size());
    for (std::size_t i = 0; i < r1.history.size(); ++i) {
        CHECK(r1.history[i].train_loss == r2.history[i].train_loss);
        CHECK(r1.history[i].test_rr_mse == r2.history[i].test_rr_mse);
    }
    CHECK(r1.best_model.flatten_params() == r2.best_model.flatten_params());

    // checkpoint dominance
    CHECK(r1.best_metric <= r1.history.back().test_rr_mse);

    CHECK_THROWS_AS(training::train({}, test_set, cfg), std::invalid_argument);
}

TEST_CASE("model file round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "ecgrr_model_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "model.json";

    training::TrainConfig cfg;
    cfg.arch = Arch::AE_DCT;
    cfg.seed = 99;
    Model model = Model::seeded(Arch::AE_DCT, 99);
    // perturb the dct parameters so the round trip is not trivially 1/0
    model.dct.scales[3] = 1.25;
    model.dct.thresholds[2] = 0.0625;

    training::save_model(model, cfg, path);
    auto [loaded, loaded_cfg] = training::load_model(path);

    CHECK(loaded.arch == Arch::AE_DCT);
    CHECK(loaded.flatten_params() == model.flatten_params());  // bit-exact
    CHECK(loaded_cfg.seed == 99);

    // architecture mismatch
    CHECK_THROWS_AS(training::load_model(path, Arch::AE), DataError);

    // truncated file
    const auto broken = dir / "broken.json";
    {
        std::ifstream in(path);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        std::ofstream out(broken);
        out << text.substr(0, text.size() / 2);
    }
    CHECK_THROWS_AS(training::load_model(broken), DataError);

    CHECK_THROWS_AS(training::load_model(dir / "missing.json"), DataError);
    std::filesystem::remove_all(dir);
}
