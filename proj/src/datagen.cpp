#include "ecgrr/datagen.hpp"

#include "ecgrr/errors.hpp"
#include "ecgrr/rng.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <stdexcept>

namespace ecgrr::datagen {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Respiration phase in cycles at time t: f0*t plus the frequency-modulation
// integral. The modulation integrates to zero over any whole number of
// modulation periods.
double breath_cycles(double t, double f0, double df, double t_mod) {
    return f0 * t + df * (t_mod / kTwoPi) * (1.0 - std::cos(kTwoPi * t / t_mod));
}

spectral::EcgRecord synth_with_f0(const GenConfig& cfg, Rng& rng, double f0, double df) {
    const auto n = static_cast<std::size_t>(std::llround(cfg.sample_rate_hz * cfg.duration_s));
    const double dt = 1.0 / cfg.sample_rate_hz;

    const double heart_rate = rng.uniform(cfg.heart_rate_lo_bpm, cfg.heart_rate_hi_bpm);
    const double beat_period = 60.0 / heart_rate;
    const double first_beat = rng.uniform(0.0, beat_period);
    const double breath_phase0 = rng.uniform(0.0, kTwoPi);

    spectral::EcgRecord record;
    record.sample_rate_hz = cfg.sample_rate_hz;
    record.samples.assign(n, 0.0);

    // QRS pulse train: narrow Gaussians at the beat instants.
    const double w = cfg.qrs_width_s;
    for (double tb = first_beat; tb < cfg.duration_s + 5.0 * w; tb += beat_period) {
        const auto lo = static_cast<long long>(std::floor((tb - 5.0 * w) / dt));
        const auto hi = static_cast<long long>(std::ceil((tb + 5.0 * w) / dt));
        for (long long i = std::max(lo, 0LL); i <= hi && i < static_cast<long long>(n); ++i) {
            const double d = static_cast<double>(i) * dt - tb;
            record.samples[static_cast<std::size_t>(i)] +=
                cfg.qrs_amplitude_mv * std::exp(-(d * d) / (2.0 * w * w));
        }
    }

    // Baseline wander and measurement noise.
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) * dt;
        const double phase = breath_phase0 + kTwoPi * breath_cycles(t, f0, df, cfg.mod_period_s);
        record.samples[i] += cfg.baseline_amplitude_mv * std::cos(phase);
        record.samples[i] += cfg.noise_sigma_mv * rng.normal();
    }

    record.true_rr_bpm = static_cast<int>(
        std::llround(breath_cycles(cfg.duration_s, f0, df, cfg.mod_period_s)));
    return record;
}

} // namespace

spectral::EcgRecord synth_record(const GenConfig& cfg, std::uint64_t seed, bool uneven) {
    Rng rng(seed);
    const int target_rr = rng.uniform_int(cfg.rr_lo_bpm, cfg.rr_hi_bpm);
    double f0 = static_cast<double>(target_rr) / 60.0;
    double df = 0.0;
    if (uneven) {
        df = rng.uniform(0.6 * cfg.df_max_hz, cfg.df_max_hz);
    }

    // Bounded retries if the rounded label lands outside the configured range.
    for (int attempt = 0; attempt < 8; ++attempt) {
        spectral::EcgRecord record = synth_with_f0(cfg, rng, f0, df);
        if (record.true_rr_bpm >= cfg.rr_lo_bpm && record.true_rr_bpm <= cfg.rr_hi_bpm) {
            return record;
        }
        f0 = rng.uniform(static_cast<double>(cfg.rr_lo_bpm) + 1.0,
                         static_cast<double>(cfg.rr_hi_bpm) - 1.0) /
             60.0;
    }
    throw DataError("synth_record: could not generate a label inside the configured range");
}

namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

nlohmann::json gen_config_to_json(const GenConfig& c) {
    return {
        {"sample_rate_hz", c.sample_rate_hz},
        {"duration_s", c.duration_s},
        {"heart_rate_lo_bpm", c.heart_rate_lo_bpm},
        {"heart_rate_hi_bpm", c.heart_rate_hi_bpm},
        {"qrs_amplitude_mv", c.qrs_amplitude_mv},
        {"qrs_width_s", c.qrs_width_s},
        {"baseline_amplitude_mv", c.baseline_amplitude_mv},
        {"rr_lo_bpm", c.rr_lo_bpm},
        {"rr_hi_bpm", c.rr_hi_bpm},
        {"uneven_fraction", c.uneven_fraction},
        {"df_max_hz", c.df_max_hz},
        {"mod_period_s", c.mod_period_s},
        {"noise_sigma_mv", c.noise_sigma_mv},
    };
}

GenConfig gen_config_from_json(const nlohmann::json& j) {
    GenConfig c;
    c.sample_rate_hz = j.at("sample_rate_hz").get<double>();
    c.duration_s = j.at("duration_s").get<double>();
    c.heart_rate_lo_bpm = j.at("heart_rate_lo_bpm").get<double>();
    c.heart_rate_hi_bpm = j.at("heart_rate_hi_bpm").get<double>();
    c.qrs_amplitude_mv = j.at("qrs_amplitude_mv").get<double>();
    c.qrs_width_s = j.at("qrs_width_s").get<double>();
    c.baseline_amplitude_mv = j.at("baseline_amplitude_mv").get<double>();
    c.rr_lo_bpm = j.at("rr_lo_bpm").get<int>();
    c.rr_hi_bpm = j.at("rr_hi_bpm").get<int>();
    c.uneven_fraction = j.at("uneven_fraction").get<double>();
    c.df_max_hz = j.at("df_max_hz").get<double>();
    c.mod_period_s = j.at("mod_period_s").get<double>();
    c.noise_sigma_mv = j.at("noise_sigma_mv").get<double>();
    return c;
}

void write_record_csv(const spectral::EcgRecord& record, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("generate_dataset: cannot open " + path.string());
    }
    out << "ecg_mv\n";
    std::string body;
    body.reserve(record.samples.size() * 20);
    for (double v : record.samples) {
        body += format_double(v);
        body += '\n';
    }
    out << body;
}

} // namespace

DatasetManifest generate_dataset(std::size_t n, const GenConfig& cfg, std::uint64_t seed,
                                 const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    DatasetManifest manifest;
    manifest.sample_rate_hz = cfg.sample_rate_hz;
    manifest.duration_s = cfg.duration_s;
    manifest.gen_config = cfg;
    manifest.records.resize(n);

    // Fractional accumulator spreads the uneven records evenly through the set.
    std::vector<char> uneven(n, 0);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += cfg.uneven_fraction;
        if (acc >= 1.0 - 1e-12) {
            acc -= 1.0;
            uneven[i] = 1;
        }
    }

    // Generate in parallel (independent per-record seeds), write serially so
    // I/O errors surface as ordinary exceptions.
    std::vector<spectral::EcgRecord> generated(n);
#pragma omp parallel for schedule(dynamic)
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        generated[i] = synth_record(cfg, mix_seed(seed, i), uneven[i] != 0);
    }

    for (std::size_t i = 0; i < n; ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "rec_%04zu.csv", i);
        write_record_csv(generated[i], out_dir / name);
        manifest.records[i] = {name, generated[i].true_rr_bpm, mix_seed(seed, i)};
    }

    nlohmann::json j;
    j["version"] = manifest.version;
    j["sample_rate_hz"] = manifest.sample_rate_hz;
    j["duration_s"] = manifest.duration_s;
    nlohmann::json records = nlohmann::json::array();
    for (const auto& e : manifest.records) {
        records.push_back({{"file", e.file}, {"rr_bpm", e.rr_bpm}, {"seed", e.seed}});
    }
    j["records"] = records;
    j["gen_config"] = gen_config_to_json(cfg);

    std::ofstream out(out_dir / "manifest.json");
    if (!out) {
        throw DataError("generate_dataset: cannot write manifest in " + out_dir.string());
    }
    out << j.dump(2) << '\n';
    return manifest;
}

Dataset load_dataset(const std::filesystem::path& dir) {
    const auto manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) {
        throw DataError("load_dataset: cannot open " + manifest_path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_dataset: malformed manifest: " + std::string(e.what()));
    }

    Dataset dataset;
    try {
        dataset.manifest.version = j.at("version").get<int>();
        dataset.manifest.sample_rate_hz = j.at("sample_rate_hz").get<double>();
        dataset.manifest.duration_s = j.at("duration_s").get<double>();
        dataset.manifest.gen_config = gen_config_from_json(j.at("gen_config"));
        for (const auto& r : j.at("records")) {
            dataset.manifest.records.push_back({r.at("file").get<std::string>(),
                                                r.at("rr_bpm").get<int>(),
                                                r.at("seed").get<std::uint64_t>()});
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("load_dataset: malformed manifest: " + std::string(e.what()));
    }

    const auto expected_samples = static_cast<std::size_t>(
        std::llround(dataset.manifest.sample_rate_hz * dataset.manifest.duration_s));

    dataset.records.resize(dataset.manifest.records.size());
    for (std::size_t i = 0; i < dataset.manifest.records.size(); ++i) {
        const auto& entry = dataset.manifest.records[i];
        const auto path = dir / entry.file;
        std::ifstream rec_in(path);
        if (!rec_in) {
            throw DataError("load_dataset: missing record file " + path.string());
        }
        std::string line;
        if (!std::getline(rec_in, line) || line != "ecg_mv") {
            throw DataError("load_dataset: bad CSV header in " + path.string());
        }
        spectral::EcgRecord& record = dataset.records[i];
        record.sample_rate_hz = dataset.manifest.sample_rate_hz;
        record.true_rr_bpm = entry.rr_bpm;
        record.samples.reserve(expected_samples);
        while (std::getline(rec_in, line)) {
            if (line.empty()) continue;
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
            if (ec != std::errc{} || ptr != line.data() + line.size()) {
                throw DataError("load_dataset: malformed sample in " + path.string());
            }
            record.samples.push_back(v);
        }
        if (record.samples.size() != expected_samples) {
            throw DataError("load_dataset: " + path.string() + " has " +
                            std::to_string(record.samples.size()) + " samples, expected " +
                            std::to_string(expected_samples));
        }
    }
    return dataset;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
split_dataset(std::size_t total, std::uint64_t split_seed, std::size_t n_train) {
    if (n_train >= total) {
        throw std::invalid_argument("split_dataset: n_train must be smaller than the dataset");
    }
    std::vector<std::size_t> perm(total);
    for (std::size_t i = 0; i < total; ++i) {
        perm[i] = i;
    }
    Rng rng(split_seed);
    for (std::size_t i = total; i > 1; --i) {
        const auto k = static_cast<std::size_t>(rng.next_u64() % i);
        std::swap(perm[i - 1], perm[k]);
    }
    std::vector<std::size_t> train(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
    std::vector<std::size_t> test(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
    return {std::move(train), std::move(test)};
}

} // namespace ecgrr::datagen
