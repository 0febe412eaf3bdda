// Timing comparison between the serial reference kernels and the OpenMP
// versions. Both paths are bit-identical by construction; this just reports
// throughput.

#include "ecgrr/datagen.hpp"
#include "ecgrr/harness.hpp"
#include "ecgrr/model.hpp"
#include "ecgrr/rng.hpp"
#include "ecgrr/spectral.hpp"
#include "ecgrr/training.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn();  // warm-up
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) {
        fn();
    }
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() / reps;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads = %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP not enabled; both columns run the same serial code\n");
#endif

    using namespace ecgrr;

    datagen::GenConfig gen_cfg;
    const spectral::EcgRecord record = datagen::synth_record(gen_cfg, 42, false);

    const double dft_serial = time_ms(
        [&] { spectral::dft_magnitude_serial(record.samples, spectral::kSpectrumLen); }, 10);
    const double dft_parallel =
        time_ms([&] { spectral::dft_magnitude(record.samples, spectral::kSpectrumLen); }, 10);
    std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
                "dft_magnitude (30000x32)", dft_serial, dft_parallel, dft_serial / dft_parallel);

    // batch gradient over a synthetic training set
    std::vector<spectral::EcgRecord> records;
    for (std::uint64_t i = 0; i < 167; ++i) {
        records.push_back(datagen::synth_record(gen_cfg, mix_seed(7, i), i % 5 < 2));
    }
    const auto samples = harness::prepare_samples(records);
    const Model model = Model::seeded(Arch::AE_DCT, 0);

    double loss = 0.0;
    const double grad_serial =
        time_ms([&] { training::batch_gradient_serial(model, samples, &loss); }, 50);
    const double grad_parallel =
        time_ms([&] { training::batch_gradient(model, samples, &loss); }, 50);
    std::printf("%-28s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
                "batch_gradient (167 x ae-dct)", grad_serial, grad_parallel,
                grad_serial / grad_parallel);
    return 0;
}
