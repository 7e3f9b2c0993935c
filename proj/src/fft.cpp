#include "reverbkit/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace revkit {

bool is_power_of_two(size_t n) { return n > 0 && (n & (n - 1)) == 0; }

Fft::Fft(size_t n) : n_(n) {
    if (!is_power_of_two(n)) throw std::invalid_argument("Fft: size must be a power of two");

    rev_.resize(n);
    size_t log2n = 0;
    while ((size_t(1) << log2n) < n) ++log2n;
    for (size_t i = 0; i < n; ++i) {
        size_t r = 0;
        for (size_t b = 0; b < log2n; ++b)
            if (i & (size_t(1) << b)) r |= size_t(1) << (log2n - 1 - b);
        rev_[i] = r;
    }

    // One twiddle table per butterfly stage, laid out consecutively.
    twiddle_.reserve(n);
    twiddle_inv_.reserve(n);
    for (size_t len = 2; len <= n; len <<= 1) {
        for (size_t k = 0; k < len / 2; ++k) {
            const double ang = -2.0 * M_PI * static_cast<double>(k) / static_cast<double>(len);
            twiddle_.emplace_back(std::cos(ang), std::sin(ang));
            twiddle_inv_.emplace_back(std::cos(ang), -std::sin(ang));
        }
    }
}

void Fft::transform(std::complex<double>* a, bool inv) const {
    const auto& tw = inv ? twiddle_inv_ : twiddle_;
    for (size_t i = 0; i < n_; ++i) {
        const size_t j = rev_[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    size_t stage_base = 0;
    for (size_t len = 2; len <= n_; len <<= 1) {
        const size_t half = len / 2;
        for (size_t start = 0; start < n_; start += len) {
            for (size_t k = 0; k < half; ++k) {
                const std::complex<double> w = tw[stage_base + k];
                const std::complex<double> u = a[start + k];
                const std::complex<double> v = a[start + k + half] * w;
                a[start + k] = u + v;
                a[start + k + half] = u - v;
            }
        }
        stage_base += half;
    }
}

void Fft::inverse(std::complex<double>* data) const {
    transform(data, true);
    const double scale = 1.0 / static_cast<double>(n_);
    for (size_t i = 0; i < n_; ++i) data[i] *= scale;
}

}  // namespace revkit
