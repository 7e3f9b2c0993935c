// Independent reference implementations used only by tests. These stay
// deliberately naive (direct DFT sums, nested-loop convolution) so the
// library paths are checked against code that shares nothing with them.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

namespace oracle {

// O(n^2) DFT.
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
    const size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (size_t j = 0; j < n; ++j) {
            const double ang = -2.0 * M_PI * static_cast<double>(k * j % n) / n;
            acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

// Linear convolution via the DFT product (recursive radix-2 FFT written
// independently of the library's iterative one).
inline void fft_rec(std::vector<std::complex<double>>& a, bool invert) {
    const size_t n = a.size();
    if (n == 1) return;
    std::vector<std::complex<double>> even(n / 2), odd(n / 2);
    for (size_t i = 0; 2 * i < n; ++i) {
        even[i] = a[2 * i];
        odd[i] = a[2 * i + 1];
    }
    fft_rec(even, invert);
    fft_rec(odd, invert);
    const double ang = 2.0 * M_PI / n * (invert ? 1 : -1);
    std::complex<double> w(1.0), wn(std::cos(ang), std::sin(ang));
    for (size_t i = 0; 2 * i < n; ++i) {
        a[i] = even[i] + w * odd[i];
        a[i + n / 2] = even[i] - w * odd[i];
        if (invert) {
            a[i] /= 2.0;
            a[i + n / 2] /= 2.0;
        }
        w *= wn;
    }
}

inline std::vector<double> fft_convolve(const std::vector<double>& a, const std::vector<double>& b) {
    size_t n = 1;
    while (n < a.size() + b.size() - 1) n <<= 1;
    std::vector<std::complex<double>> fa(n, 0.0), fb(n, 0.0);
    for (size_t i = 0; i < a.size(); ++i) fa[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) fb[i] = b[i];
    fft_rec(fa, false);
    fft_rec(fb, false);
    for (size_t i = 0; i < n; ++i) fa[i] *= fb[i];
    fft_rec(fa, true);
    std::vector<double> out(a.size() + b.size() - 1);
    for (size_t i = 0; i < out.size(); ++i) out[i] = fa[i].real();
    return out;
}

// Magnitude of the DFT bin nearest to a frequency, via a Goertzel-style
// direct sum.
inline double bin_magnitude(const std::vector<float>& x, double freq_hz, int sample_rate) {
    std::complex<double> acc{0.0, 0.0};
    for (size_t n = 0; n < x.size(); ++n) {
        const double ang = -2.0 * M_PI * freq_hz * static_cast<double>(n) / sample_rate;
        acc += static_cast<double>(x[n]) * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return std::abs(acc);
}

// Peak frequency of a real signal by dense DFT scan over [lo, hi] Hz.
inline double peak_frequency(const std::vector<float>& x, int sample_rate, double lo, double hi,
                             double step_hz) {
    double best_f = lo, best_m = -1.0;
    for (double f = lo; f <= hi; f += step_hz) {
        const double m = bin_magnitude(x, f, sample_rate);
        if (m > best_m) {
            best_m = m;
            best_f = f;
        }
    }
    return best_f;
}

}  // namespace oracle
