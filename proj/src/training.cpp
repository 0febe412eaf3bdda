#include "ecgrr/training.hpp"

#include "ecgrr/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace ecgrr::training {

std::array<double, 32> gaussian_target(const TargetSpec& spec) {
    std::array<double, 32> out{};
    for (int x = 0; x < 32; ++x) {
        const double d = static_cast<double>(x) - spec.mu;
        out[static_cast<std::size_t>(x)] = std::exp(-(d * d) / (spec.sigma * spec.sigma));
    }
    return out;
}

MseResult mse_loss(std::span<const double> pred, std::span<const double> target) {
    if (pred.size() != target.size()) {
        throw std::invalid_argument("mse_loss: length mismatch");
    }
    const double inv_len = 1.0 / static_cast<double>(pred.size());
    MseResult result;
    result.loss = 0.0;
    result.grad.resize(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double diff = pred[i] - target[i];
        result.loss += diff * diff * inv_len;
        result.grad[i] = 2.0 * diff * inv_len;
    }
    return result;
}

AdamW::AdamW(std::size_t param_count)
    : m_(param_count, 0.0), v_(param_count, 0.0) {}

void AdamW::step(std::span<double> params, std::span<const double> grads,
                 const TrainConfig& cfg) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw std::invalid_argument("AdamW::step: shape mismatch");
    }
    ++step_;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step_));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        m_[i] = cfg.beta1 * m_[i] + (1.0 - cfg.beta1) * grads[i];
        v_[i] = cfg.beta2 * v_[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
        const double m_hat = m_[i] / bc1;
        const double v_hat = v_[i] / bc2;
        params[i] -= cfg.learning_rate * (m_hat / (std::sqrt(v_hat) + cfg.epsilon));
        params[i] -= cfg.learning_rate * cfg.weight_decay * params[i];
    }
}

namespace {

// Pairwise reduction in a fixed order; result does not depend on how the
// per-sample gradients were produced.
std::vector<double> tree_sum(std::vector<std::vector<double>>& terms) {
    if (terms.empty()) {
        return {};
    }
    std::size_t count = terms.size();
    while (count > 1) {
        const std::size_t half = (count + 1) / 2;
        for (std::size_t i = 0; i + half < count; ++i) {
            auto& dst = terms[i];
            const auto& src = terms[i + half];
            for (std::size_t j = 0; j < dst.size(); ++j) {
                dst[j] += src[j];
            }
        }
        count = half;
    }
    return std::move(terms[0]);
}

std::vector<double> batch_gradient_impl(const Model& model, const std::vector<Sample>& samples,
                                        double* loss_out, bool parallel) {
    if (samples.empty()) {
        throw std::invalid_argument("batch_gradient: empty sample set");
    }
    const std::size_t n = samples.size();
    std::vector<std::vector<double>> grads(n);
    std::vector<double> losses(n);

#pragma omp parallel for schedule(static) if (parallel)
    for (long long si = 0; si < static_cast<long long>(n); ++si) {
        const auto i = static_cast<std::size_t>(si);
        const Sample& s = samples[i];
        Model::Forward fwd = model.forward(s.x.mag);
        MseResult mse = mse_loss(fwd.output, s.target);
        losses[i] = mse.loss;
        grads[i] = model.backward(fwd, mse.grad);
    }

    std::vector<std::vector<double>> loss_terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        loss_terms[i] = {losses[i]};
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    *loss_out = tree_sum(loss_terms)[0] * inv_n;

    std::vector<double> total = tree_sum(grads);
    for (double& g : total) {
        g *= inv_n;
    }
    return total;
}

} // namespace

std::vector<double> batch_gradient(const Model& model, const std::vector<Sample>& samples,
                                   double* loss_out) {
    return batch_gradient_impl(model, samples, loss_out, true);
}

std::vector<double> batch_gradient_serial(const Model& model, const std::vector<Sample>& samples,
                                          double* loss_out) {
    return batch_gradient_impl(model, samples, loss_out, false);
}

namespace {

struct TestEval {
    double rr_mse;
    double vector_loss;
};

TestEval evaluate_test(const Model& model, const std::vector<Sample>& test_set) {
    const std::size_t n = test_set.size();
    std::vector<double> sq_err(n);
    std::vector<double> vec_loss(n);
#pragma omp parallel for schedule(static)
    for (long long si = 0; si < static_cast<long long>(n); ++si) {
        const auto i = static_cast<std::size_t>(si);
        const Sample& s = test_set[i];
        Model::Forward fwd = model.forward(s.x.mag);
        const int est = output_peak_bpm(fwd.output);
        const double err = static_cast<double>(est - s.true_rr_bpm);
        sq_err[i] = err * err;
        double acc = 0.0;
        for (std::size_t j = 0; j < fwd.output.size(); ++j) {
            const double d = fwd.output[j] - s.target[j];
            acc += d * d;
        }
        vec_loss[i] = acc / static_cast<double>(fwd.output.size());
    }
    TestEval eval{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        eval.rr_mse += sq_err[i];
        eval.vector_loss += vec_loss[i];
    }
    eval.rr_mse /= static_cast<double>(n);
    eval.vector_loss /= static_cast<double>(n);
    return eval;
}

} // namespace

TrainResult train(const std::vector<Sample>& train_set, const std::vector<Sample>& test_set,
                  const TrainConfig& cfg) {
    if (train_set.empty() || test_set.empty()) {
        throw std::invalid_argument("train: empty split");
    }
    if (cfg.epochs < 1) {
        throw std::invalid_argument("train: epochs must be >= 1");
    }

    Model model = Model::seeded(cfg.arch, cfg.seed);
    std::vector<double> params = model.flatten_params();
    AdamW opt(params.size());

    TrainResult result;
    result.best_model = model;
    result.best_metric = std::numeric_limits<double>::infinity();
    result.history.reserve(static_cast<std::size_t>(cfg.epochs));

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        double train_loss = 0.0;
        std::vector<double> grad = batch_gradient(model, train_set, &train_loss);
        if (!std::isfinite(train_loss)) {
            throw NumericFailure("train: non-finite loss at epoch " + std::to_string(epoch));
        }
        opt.step(params, grad, cfg);
        model.set_params(params);

        const TestEval eval = evaluate_test(model, test_set);
        result.history.push_back({train_loss, eval.rr_mse, eval.vector_loss});

        const double metric =
            cfg.checkpoint_metric == CheckpointMetric::RR_MSE ? eval.rr_mse : eval.vector_loss;
        if (metric < result.best_metric) {
            result.best_metric = metric;
            result.best_epoch = epoch;
            result.best_model = model;
        }
    }
    return result;
}

namespace {

constexpr int kModelFileVersion = 1;

nlohmann::json config_to_json(const TrainConfig& cfg) {
    return {
        {"learning_rate", cfg.learning_rate},
        {"epochs", cfg.epochs},
        {"beta1", cfg.beta1},
        {"beta2", cfg.beta2},
        {"epsilon", cfg.epsilon},
        {"weight_decay", cfg.weight_decay},
        {"seed", cfg.seed},
        {"checkpoint_metric",
         cfg.checkpoint_metric == CheckpointMetric::RR_MSE ? "rr-mse" : "vector-loss"},
    };
}

TrainConfig config_from_json(const nlohmann::json& j) {
    TrainConfig cfg;
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.epochs = j.at("epochs").get<int>();
    cfg.beta1 = j.at("beta1").get<double>();
    cfg.beta2 = j.at("beta2").get<double>();
    cfg.epsilon = j.at("epsilon").get<double>();
    cfg.weight_decay = j.at("weight_decay").get<double>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.checkpoint_metric = j.at("checkpoint_metric").get<std::string>() == "vector-loss"
                                ? CheckpointMetric::VECTOR_LOSS
                                : CheckpointMetric::RR_MSE;
    return cfg;
}

} // namespace

void save_model(const Model& model, const TrainConfig& cfg, const std::filesystem::path& path) {
    nlohmann::json j;
    j["version"] = kModelFileVersion;
    j["arch"] = arch_name(model.arch);
    nlohmann::json layers = nlohmann::json::array();
    for (const auto& layer : model.ae.layers) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t r = 0; r < layer.out_dim; ++r) {
            rows.push_back(std::vector<double>(
                layer.weight.begin() + static_cast<std::ptrdiff_t>(r * layer.in_dim),
                layer.weight.begin() + static_cast<std::ptrdiff_t>((r + 1) * layer.in_dim)));
        }
        layers.push_back({{"w", rows}, {"b", layer.bias}});
    }
    j["layers"] = layers;
    if (model.arch == Arch::AE_DCT) {
        j["dct"] = {{"v", model.dct.scales}, {"t", model.dct.thresholds}};
    }
    j["config"] = config_to_json(cfg);

    std::ofstream out(path);
    if (!out) {
        throw DataError("save_model: cannot open " + path.string());
    }
    out << j.dump(2) << '\n';
}

std::pair<Model, TrainConfig> load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("load_model: cannot open " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_model: malformed file " + path.string() + ": " + e.what());
    }
    try {
        if (j.at("version").get<int>() != kModelFileVersion) {
            throw DataError("load_model: unsupported version in " + path.string());
        }
        const Arch arch = arch_from_name(j.at("arch").get<std::string>());
        Model model = Model::seeded(arch, 0);
        const auto& layers = j.at("layers");
        if (layers.size() != net::kNumLayers) {
            throw DataError("load_model: wrong layer count in " + path.string());
        }
        for (std::size_t l = 0; l < net::kNumLayers; ++l) {
            auto& layer = model.ae.layers[l];
            const auto& rows = layers[l].at("w");
            if (rows.size() != layer.out_dim) {
                throw DataError("load_model: layer " + std::to_string(l) + " row count mismatch");
            }
            for (std::size_t r = 0; r < layer.out_dim; ++r) {
                const auto row = rows[r].get<std::vector<double>>();
                if (row.size() != layer.in_dim) {
                    throw DataError("load_model: layer " + std::to_string(l) +
                                    " column count mismatch");
                }
                std::copy(row.begin(), row.end(), layer.weight.begin() +
                                                      static_cast<std::ptrdiff_t>(r * layer.in_dim));
            }
            const auto bias = layers[l].at("b").get<std::vector<double>>();
            if (bias.size() != layer.out_dim) {
                throw DataError("load_model: layer " + std::to_string(l) + " bias size mismatch");
            }
            layer.bias = bias;
        }
        if (arch == Arch::AE_DCT) {
            const auto scales = j.at("dct").at("v").get<std::vector<double>>();
            const auto thresholds = j.at("dct").at("t").get<std::vector<double>>();
            if (scales.size() != model.dct.m || thresholds.size() != model.dct.m) {
                throw DataError("load_model: dct parameter size mismatch");
            }
            model.dct.scales = scales;
            model.dct.thresholds = thresholds;
        }
        return {std::move(model), config_from_json(j.at("config"))};
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_model: malformed file " + path.string() + ": " + e.what());
    }
}

Model load_model(const std::filesystem::path& path, Arch expected) {
    auto [model, cfg] = load_model(path);
    if (model.arch != expected) {
        throw DataError("load_model: " + path.string() + " holds arch '" +
                        arch_name(model.arch) + "' but '" + arch_name(expected) +
                        "' was requested");
    }
    return std::move(model);
}

} // namespace ecgrr::training
