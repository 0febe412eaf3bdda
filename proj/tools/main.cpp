#include "ecgrr/datagen.hpp"
#include "ecgrr/errors.hpp"
#include "ecgrr/harness.hpp"
#include "ecgrr/training.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace ecgrr;

spectral::EcgRecord read_record_csv(const std::string& path, double sample_rate_hz) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != "ecg_mv") {
        throw DataError("bad CSV header in " + path + " (expected 'ecg_mv')");
    }
    spectral::EcgRecord record;
    record.sample_rate_hz = sample_rate_hz;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(line.data(), line.data() + line.size(), v);
        if (ec != std::errc{} || ptr != line.data() + line.size()) {
            throw DataError("malformed sample in " + path);
        }
        record.samples.push_back(v);
    }
    return record;
}

void write_report(const harness::Report& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw DataError("cannot write report to " + path);
    }
    out << report.to_csv();
    std::cout << report.to_table();
}

int run(int argc, char** argv) {
    CLI::App app{"ECG-derived respiration rate estimation"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a synthetic ECG dataset");
    std::string gen_out;
    std::size_t gen_n = 267;
    std::uint64_t gen_seed = 0;
    datagen::GenConfig gen_cfg;
    gen->add_option("--out", gen_out, "Output directory")->required();
    gen->add_option("--n", gen_n, "Number of records");
    gen->add_option("--seed", gen_seed, "Master seed")->required();
    gen->add_option("--uneven-fraction", gen_cfg.uneven_fraction,
                    "Fraction of records with uneven breathing");

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a model on a dataset split");
    std::string train_data, train_arch = "ae", train_model_out;
    std::uint64_t train_split_seed = 0;
    training::TrainConfig train_cfg;
    std::size_t train_n_train = 167;
    train_cmd->add_option("--data", train_data, "Dataset directory")->required();
    train_cmd->add_option("--arch", train_arch, "Architecture: ae | ae-dct")
        ->check(CLI::IsMember({"ae", "ae-dct"}));
    train_cmd->add_option("--split-seed", train_split_seed, "Split seed")->required();
    train_cmd->add_option("--epochs", train_cfg.epochs, "Training epochs");
    train_cmd->add_option("--lr", train_cfg.learning_rate, "Learning rate");
    train_cmd->add_option("--seed", train_cfg.seed, "Initialization seed");
    train_cmd->add_option("--n-train", train_n_train, "Training split size");
    train_cmd->add_option("--model-out", train_model_out, "Model file path")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a method on a test split");
    std::string eval_data, eval_method = "dft", eval_model, eval_report;
    std::uint64_t eval_split_seed = 0;
    std::size_t eval_n_train = 167;
    eval_cmd->add_option("--data", eval_data, "Dataset directory")->required();
    eval_cmd->add_option("--method", eval_method, "Method: dft | ae | ae-dct")
        ->check(CLI::IsMember({"dft", "ae", "ae-dct"}));
    eval_cmd->add_option("--model", eval_model, "Model file (for ae / ae-dct)");
    eval_cmd->add_option("--split-seed", eval_split_seed, "Split seed")->required();
    eval_cmd->add_option("--n-train", eval_n_train, "Training split size");
    eval_cmd->add_option("--report", eval_report, "Report CSV path")->required();

    // experiment
    auto* exp_cmd = app.add_subcommand("experiment", "Run the three-split comparison");
    std::string exp_data, exp_report;
    std::vector<std::uint64_t> exp_seeds;
    harness::ExperimentConfig exp_cfg;
    exp_cmd->add_option("--data", exp_data, "Dataset directory")->required();
    exp_cmd->add_option("--seeds", exp_seeds, "Three split seeds (comma separated)")
        ->delimiter(',')
        ->expected(3)
        ->required();
    exp_cmd->add_option("--epochs", exp_cfg.train.epochs, "Training epochs");
    exp_cmd->add_option("--report", exp_report, "Report CSV path")->required();

    // estimate
    auto* est_cmd = app.add_subcommand("estimate", "Estimate RR for one record");
    std::string est_input, est_method = "dft", est_model;
    double est_rate = 500.0;
    est_cmd->add_option("--input", est_input, "Record CSV file")->required();
    est_cmd->add_option("--method", est_method, "Method: dft | ae | ae-dct")
        ->check(CLI::IsMember({"dft", "ae", "ae-dct"}));
    est_cmd->add_option("--model", est_model, "Model file (for ae / ae-dct)");
    est_cmd->add_option("--sample-rate", est_rate, "Sample rate in Hz");

    CLI11_PARSE(app, argc, argv);

    if (gen->parsed()) {
        datagen::generate_dataset(gen_n, gen_cfg, gen_seed, gen_out);
        std::cout << "wrote " << gen_n << " records to " << gen_out << "\n";
        return 0;
    }

    if (train_cmd->parsed()) {
        train_cfg.arch = arch_from_name(train_arch);
        datagen::Dataset dataset = datagen::load_dataset(train_data);
        auto samples = harness::prepare_samples(dataset.records);
        auto [train_idx, test_idx] =
            datagen::split_dataset(samples.size(), train_split_seed, train_n_train);
        std::vector<training::Sample> train_set, test_set;
        for (auto i : train_idx) train_set.push_back(samples[i]);
        for (auto i : test_idx) test_set.push_back(samples[i]);
        training::TrainResult result = training::train(train_set, test_set, train_cfg);
        training::save_model(result.best_model, train_cfg, train_model_out);
        std::cout << "best epoch " << result.best_epoch << ", test rr-mse "
                  << result.best_metric << ", model saved to " << train_model_out << "\n";
        return 0;
    }

    if (eval_cmd->parsed()) {
        const harness::Method method = harness::method_from_name(eval_method);
        Model model;
        const Model* model_ptr = nullptr;
        if (method != harness::Method::DFT) {
            if (eval_model.empty()) {
                throw DataError("--model is required for method '" + eval_method + "'");
            }
            model = training::load_model(eval_model).first;
            model_ptr = &model;
        }
        datagen::Dataset dataset = datagen::load_dataset(eval_data);
        auto [train_idx, test_idx] =
            datagen::split_dataset(dataset.records.size(), eval_split_seed, eval_n_train);
        std::vector<spectral::EcgRecord> test_records;
        for (auto i : test_idx) test_records.push_back(dataset.records[i]);
        harness::Metrics metrics = harness::evaluate(method, model_ptr, test_records);
        harness::Report report;
        report.rows.push_back({"1", method, metrics});
        write_report(report, eval_report);
        return 0;
    }

    if (exp_cmd->parsed()) {
        std::copy(exp_seeds.begin(), exp_seeds.end(), exp_cfg.split_seeds.begin());
        harness::Report report = harness::run_experiment(exp_data, exp_cfg);
        write_report(report, exp_report);
        return 0;
    }

    if (est_cmd->parsed()) {
        const harness::Method method = harness::method_from_name(est_method);
        Model model;
        const Model* model_ptr = nullptr;
        if (method != harness::Method::DFT) {
            if (est_model.empty()) {
                throw DataError("--model is required for method '" + est_method + "'");
            }
            model = training::load_model(est_model).first;
            model_ptr = &model;
        }
        spectral::EcgRecord record = read_record_csv(est_input, est_rate);
        std::cout << harness::estimate_rr(method, model_ptr, record) << "\n";
        return 0;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ecgrr::NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const ecgrr::DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ecgrr::DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
