// Independent reference implementations used only by tests. Deliberately
// written as plain double loops, separate from the library code paths they
// check.
#pragma once

#include "ecgrr/model.hpp"
#include "ecgrr/rng.hpp"

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

namespace oracles {

// |DFT| by direct complex summation.
inline std::vector<double> naive_dft_magnitude(std::span<const double> x, std::size_t k_max) {
    const std::size_t n = x.size();
    std::vector<double> mag(k_max);
    for (std::size_t k = 0; k < k_max; ++k) {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = -2.0 * std::numbers::pi * static_cast<double>(k) *
                             static_cast<double>(i) / static_cast<double>(n);
            re += x[i] * std::cos(a);
            im += x[i] * std::sin(a);
        }
        mag[k] = std::sqrt(re * re + im * im);
    }
    return mag;
}

// Truncated type-II DCT, direct summation.
inline std::vector<double> naive_dct(std::span<const double> x, std::size_t m) {
    const auto n = x.size();
    std::vector<double> out(m);
    for (std::size_t k = 0; k < m; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            acc += x[i] * std::cos(std::numbers::pi / (2.0 * static_cast<double>(n)) *
                                   static_cast<double>(2 * i + 1) * static_cast<double>(k));
        }
        out[k] = std::sqrt(2.0 / static_cast<double>(n)) * acc;
    }
    return out;
}

// Inverse DCT with the halved DC term, direct summation.
inline std::vector<double> naive_idct(std::span<const double> coeffs, std::size_t n) {
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.5 * coeffs[0];
        for (std::size_t k = 1; k < coeffs.size(); ++k) {
            acc += coeffs[k] * std::cos(std::numbers::pi / (2.0 * static_cast<double>(n)) *
                                        static_cast<double>(2 * i + 1) * static_cast<double>(k));
        }
        out[i] = std::sqrt(2.0 / static_cast<double>(n)) * acc;
    }
    return out;
}

// Central finite differences of a scalar function over a flat parameter vector.
inline std::vector<double> finite_difference(const std::function<double(std::span<const double>)>& f,
                                             std::vector<double> params, double h = 1e-5) {
    std::vector<double> grad(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double orig = params[i];
        params[i] = orig + h;
        const double fp = f(params);
        params[i] = orig - h;
        const double fm = f(params);
        params[i] = orig;
        grad[i] = (fp - fm) / (2.0 * h);
    }
    return grad;
}

// max over entries of |a-b| / max(|b|, floor). The floor keeps finite-
// difference roundoff (abs error ~1e-10 at h=1e-5) from dominating entries
// whose true gradient is tiny.
inline double max_rel_error(std::span<const double> a, std::span<const double> b,
                            double floor = 1e-4) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double denom = std::max(std::abs(b[i]), floor);
        worst = std::max(worst, std::abs(a[i] - b[i]) / denom);
    }
    return worst;
}

// Plain Adam (no weight decay), independent of the library optimizer.
struct NaiveAdam {
    std::vector<double> m, v;
    long step = 0;

    explicit NaiveAdam(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

    void update(std::vector<double>& params, const std::vector<double>& grads, double lr,
                double b1, double b2, double eps) {
        ++step;
        for (std::size_t i = 0; i < params.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * grads[i];
            v[i] = b2 * v[i] + (1.0 - b2) * grads[i] * grads[i];
            const double mh = m[i] / (1.0 - std::pow(b1, static_cast<double>(step)));
            const double vh = v[i] / (1.0 - std::pow(b2, static_cast<double>(step)));
            params[i] -= lr * mh / (std::sqrt(vh) + eps);
        }
    }
};

inline std::vector<double> random_vector(ecgrr::Rng& rng, std::size_t n, double lo = -1.0,
                                         double hi = 1.0) {
    std::vector<double> out(n);
    for (double& v : out) {
        v = rng.uniform(lo, hi);
    }
    return out;
}

} // namespace oracles
