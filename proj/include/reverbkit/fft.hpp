#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace revkit {

/// Iterative radix-2 FFT for power-of-two sizes. Twiddles and the
/// bit-reversal permutation are precomputed at construction so a plan can
/// be reused across many frames. Transforms run in place: unnormalized
/// forward, inverse() divides by N. A plan is immutable after construction
/// and safe to share across threads.
class Fft {
public:
    explicit Fft(size_t n);

    size_t size() const { return n_; }

    void forward(std::complex<double>* data) const { transform(data, false); }
    void inverse(std::complex<double>* data) const;

private:
    void transform(std::complex<double>* data, bool inv) const;

    size_t n_;
    std::vector<size_t> rev_;
    std::vector<std::complex<double>> twiddle_;      // forward, per stage
    std::vector<std::complex<double>> twiddle_inv_;  // inverse, per stage
};

bool is_power_of_two(size_t n);

}  // namespace revkit
