#pragma once

#include "ecgrr/datagen.hpp"
#include "ecgrr/model.hpp"
#include "ecgrr/spectral.hpp"
#include "ecgrr/training.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ecgrr::harness {

enum class Method { DFT, AE, AE_DCT };

std::string method_name(Method method);
Method method_from_name(const std::string& name);

struct Metrics {
    double mse_bpm2 = 0.0;
    double mae_bpm = 0.0;
    std::size_t n = 0;
};

struct ReportRow {
    std::string split;  // "1", "2", "3" or "avg"
    Method method;
    Metrics metrics;
};

struct Report {
    std::vector<ReportRow> rows;

    std::string to_csv() const;    // columns: split,method,mse,mae
    std::string to_table() const;  // aligned text table
};

// DFT needs no model; AE / AE+DCT require one of matching architecture.
int estimate_rr(Method method, const Model* model, const spectral::EcgRecord& record);
int estimate_rr_from_spectrum(Method method, const Model* model,
                              const spectral::Spectrum32& spectrum);

Metrics evaluate(Method method, const Model* model,
                 const std::vector<spectral::EcgRecord>& records);

struct ExperimentConfig {
    std::array<std::uint64_t, 3> split_seeds = {1, 2, 3};
    std::size_t n_train = 167;
    training::TrainConfig train;  // arch is overridden per method
};

// For each split seed: split, train AE and AE+DCT, evaluate all three methods
// on the test half; appends the per-method average row.
Report run_experiment(const std::filesystem::path& dataset_dir, const ExperimentConfig& cfg);

// Spectra + Gaussian targets for a set of records (parallel over records).
std::vector<training::Sample> prepare_samples(const std::vector<spectral::EcgRecord>& records);

} // namespace ecgrr::harness
