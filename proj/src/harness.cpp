#include "ecgrr/harness.hpp"

#include "ecgrr/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ecgrr::harness {

std::string method_name(Method method) {
    switch (method) {
        case Method::DFT: return "dft";
        case Method::AE: return "ae";
        case Method::AE_DCT: return "ae-dct";
    }
    return "?";
}

Method method_from_name(const std::string& name) {
    if (name == "dft") return Method::DFT;
    if (name == "ae") return Method::AE;
    if (name == "ae-dct") return Method::AE_DCT;
    throw DataError("unknown method: " + name);
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void check_model(Method method, const Model* model) {
    if (method == Method::DFT) {
        return;
    }
    if (model == nullptr) {
        throw DataError("method '" + method_name(method) + "' requires a model");
    }
    const Arch wanted = method == Method::AE ? Arch::AE : Arch::AE_DCT;
    if (model->arch != wanted) {
        throw DataError("method '" + method_name(method) + "' requires arch '" +
                        arch_name(wanted) + "' but model is '" + arch_name(model->arch) + "'");
    }
}

} // namespace

int estimate_rr_from_spectrum(Method method, const Model* model,
                              const spectral::Spectrum32& spectrum) {
    check_model(method, model);
    if (method == Method::DFT) {
        return spectral::dft_peak_rr(spectrum);
    }
    Model::Forward fwd = model->forward(spectrum.mag);
    return output_peak_bpm(fwd.output);
}

int estimate_rr(Method method, const Model* model, const spectral::EcgRecord& record) {
    return estimate_rr_from_spectrum(method, model, spectral::extract_spectrum(record));
}

Metrics evaluate(Method method, const Model* model,
                 const std::vector<spectral::EcgRecord>& records) {
    if (records.empty()) {
        throw std::invalid_argument("evaluate: empty record list");
    }
    check_model(method, model);
    const std::size_t n = records.size();
    std::vector<double> err(n);
#pragma omp parallel for schedule(dynamic)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        const int est = estimate_rr(method, model, records[i]);
        err[i] = static_cast<double>(est - records[i].true_rr_bpm);
    }
    Metrics metrics;
    metrics.n = n;
    for (double e : err) {
        metrics.mse_bpm2 += e * e;
        metrics.mae_bpm += std::abs(e);
    }
    metrics.mse_bpm2 /= static_cast<double>(n);
    metrics.mae_bpm /= static_cast<double>(n);
    return metrics;
}

std::string Report::to_csv() const {
    std::string out = "split,method,mse,mae\n";
    for (const auto& row : rows) {
        out += row.split;
        out += ',';
        out += method_name(row.method);
        out += ',';
        out += format_double(row.metrics.mse_bpm2);
        out += ',';
        out += format_double(row.metrics.mae_bpm);
        out += '\n';
    }
    return out;
}

std::string Report::to_table() const {
    std::string out;
    char line[128];
    std::snprintf(line, sizeof(line), "%-6s %-8s %12s %12s\n", "split", "method", "mse", "mae");
    out += line;
    for (const auto& row : rows) {
        std::snprintf(line, sizeof(line), "%-6s %-8s %12.4f %12.4f\n", row.split.c_str(),
                      method_name(row.method).c_str(), row.metrics.mse_bpm2, row.metrics.mae_bpm);
        out += line;
    }
    return out;
}

std::vector<training::Sample> prepare_samples(const std::vector<spectral::EcgRecord>& records) {
    std::vector<training::Sample> samples(records.size());
#pragma omp parallel for schedule(dynamic)
    for (long long ii = 0; ii < static_cast<long long>(records.size()); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        samples[i].x = spectral::extract_spectrum(records[i]);
        samples[i].target =
            training::gaussian_target({static_cast<double>(records[i].true_rr_bpm), 2.0});
        samples[i].true_rr_bpm = records[i].true_rr_bpm;
    }
    return samples;
}

Report run_experiment(const std::filesystem::path& dataset_dir, const ExperimentConfig& cfg) {
    datagen::Dataset dataset = datagen::load_dataset(dataset_dir);
    const std::vector<training::Sample> all_samples = prepare_samples(dataset.records);

    Report report;
    constexpr std::array<Method, 3> kMethods = {Method::DFT, Method::AE, Method::AE_DCT};
    std::array<Metrics, 3> totals{};

    for (std::size_t split = 0; split < cfg.split_seeds.size(); ++split) {
        auto [train_idx, test_idx] =
            datagen::split_dataset(dataset.records.size(), cfg.split_seeds[split], cfg.n_train);

        std::vector<training::Sample> train_set;
        std::vector<training::Sample> test_set;
        train_set.reserve(train_idx.size());
        test_set.reserve(test_idx.size());
        for (std::size_t i : train_idx) train_set.push_back(all_samples[i]);
        for (std::size_t i : test_idx) test_set.push_back(all_samples[i]);

        training::TrainConfig ae_cfg = cfg.train;
        ae_cfg.arch = Arch::AE;
        training::TrainConfig dct_cfg = cfg.train;
        dct_cfg.arch = Arch::AE_DCT;

        const Model ae_model = training::train(train_set, test_set, ae_cfg).best_model;
        const Model dct_model = training::train(train_set, test_set, dct_cfg).best_model;

        const std::string split_id = std::to_string(split + 1);
        for (std::size_t mi = 0; mi < kMethods.size(); ++mi) {
            const Method method = kMethods[mi];
            const Model* model = method == Method::DFT ? nullptr
                                 : method == Method::AE ? &ae_model
                                                        : &dct_model;
            Metrics metrics;
            metrics.n = test_set.size();
            for (const auto& sample : test_set) {
                const int est = estimate_rr_from_spectrum(method, model, sample.x);
                const double e = static_cast<double>(est - sample.true_rr_bpm);
                metrics.mse_bpm2 += e * e;
                metrics.mae_bpm += std::abs(e);
            }
            metrics.mse_bpm2 /= static_cast<double>(test_set.size());
            metrics.mae_bpm /= static_cast<double>(test_set.size());
            report.rows.push_back({split_id, method, metrics});

            totals[mi].mse_bpm2 += metrics.mse_bpm2;
            totals[mi].mae_bpm += metrics.mae_bpm;
            totals[mi].n += metrics.n;
        }
    }

    const auto n_splits = static_cast<double>(cfg.split_seeds.size());
    for (std::size_t mi = 0; mi < kMethods.size(); ++mi) {
        Metrics avg;
        avg.mse_bpm2 = totals[mi].mse_bpm2 / n_splits;
        avg.mae_bpm = totals[mi].mae_bpm / n_splits;
        avg.n = totals[mi].n;
        report.rows.push_back({"avg", kMethods[mi], avg});
    }
    return report;
}

} // namespace ecgrr::harness
