#include "reverbkit/resample.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace revkit {

namespace {

constexpr int kLobes = 24;        // sinc zero crossings per side
constexpr double kRolloff = 0.945;

double blackman_harris(double x) {
    // x in [-1, 1]
    if (x < -1.0 || x > 1.0) return 0.0;
    const double t = M_PI * (x + 1.0);  // [0, 2pi]
    return 0.35875 - 0.48829 * std::cos(t) + 0.14128 * std::cos(2 * t) - 0.01168 * std::cos(3 * t);
}

double sinc(double x) {
    if (std::fabs(x) < 1e-12) return 1.0;
    const double px = M_PI * x;
    return std::sin(px) / px;
}

}  // namespace

AudioBuffer resample(const AudioBuffer& signal, int target_rate) {
    if (target_rate <= 0) throw std::invalid_argument("resample: target_rate must be positive");
    if (signal.empty()) throw std::invalid_argument("resample: empty input");
    signal.validate();
    if (target_rate == signal.sample_rate) return signal;

    const int g = std::gcd(signal.sample_rate, target_rate);
    const int64_t up = target_rate / g;
    const int64_t down = signal.sample_rate / g;

    const size_t n_in = signal.size();
    const size_t n_out = static_cast<size_t>(
        std::llround(static_cast<double>(n_in) * target_rate / signal.sample_rate));

    // Cutoff relative to the input rate; shrink when downsampling.
    const double scale = std::min(1.0, static_cast<double>(target_rate) / signal.sample_rate);
    const double fc = 0.5 * scale * kRolloff;
    const double support = kLobes / (2.0 * fc);
    const double step = static_cast<double>(down) / static_cast<double>(up);

    std::vector<float> out(n_out);
    const float* x = signal.samples.data();

#pragma omp parallel for schedule(static)
    for (int64_t n = 0; n < static_cast<int64_t>(n_out); ++n) {
        const double t = n * step;  // position in input samples
        const int64_t k0 = static_cast<int64_t>(std::ceil(t - support));
        const int64_t k1 = static_cast<int64_t>(std::floor(t + support));
        double acc = 0.0;
        for (int64_t k = std::max<int64_t>(k0, 0); k <= std::min<int64_t>(k1, n_in - 1); ++k) {
            const double tau = t - k;
            acc += x[k] * 2.0 * fc * sinc(2.0 * fc * tau) * blackman_harris(tau / support);
        }
        out[n] = static_cast<float>(acc);
    }

    return AudioBuffer(std::move(out), target_rate);
}

}  // namespace revkit
