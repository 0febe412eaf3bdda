#pragma once

#include "ecgrr/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ecgrr::datagen {

// Synthetic one-minute ECG: a QRS pulse train plus respiration-modulated
// baseline wander plus white noise. Stands in for real recordings.
struct GenConfig {
    double sample_rate_hz = 500.0;
    double duration_s = 60.0;
    double heart_rate_lo_bpm = 60.0;
    double heart_rate_hi_bpm = 90.0;
    double qrs_amplitude_mv = 1.0;
    double qrs_width_s = 0.02;
    double baseline_amplitude_mv = 0.2;
    int rr_lo_bpm = 10;
    int rr_hi_bpm = 26;
    // uneven breathing: respiration frequency f(t) = f0 + df*sin(2*pi*t/T_mod).
    // The modulation period divides the window, so the label (completed breath
    // cycles per minute) is unaffected. df_max/mod rate gives a modulation
    // index around 2, deep enough that spectral sidebands can beat the carrier.
    double uneven_fraction = 0.4;
    double df_max_hz = 0.07;
    double mod_period_s = 30.0;
    double noise_sigma_mv = 0.05;
};

struct ManifestEntry {
    std::string file;
    int rr_bpm = 0;
    std::uint64_t seed = 0;
};

struct DatasetManifest {
    int version = 1;
    double sample_rate_hz = 0.0;
    double duration_s = 0.0;
    std::vector<ManifestEntry> records;
    GenConfig gen_config;
};

// Deterministic per seed. The `uneven` flag selects a nonzero modulation depth.
spectral::EcgRecord synth_record(const GenConfig& cfg, std::uint64_t seed, bool uneven);

// Writes n CSV records (header `ecg_mv`) plus manifest.json. Labels are drawn
// uniformly over [rr_lo, rr_hi]; the configured fraction is generated uneven.
DatasetManifest generate_dataset(std::size_t n, const GenConfig& cfg, std::uint64_t seed,
                                 const std::filesystem::path& out_dir);

struct Dataset {
    std::vector<spectral::EcgRecord> records;
    DatasetManifest manifest;
};

Dataset load_dataset(const std::filesystem::path& dir);

// Seeded permutation split: first n_train to train, rest to test.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_dataset(std::size_t total, std::uint64_t split_seed, std::size_t n_train);

} // namespace ecgrr::datagen
