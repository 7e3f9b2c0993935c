#include "reverbkit/convolver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "reverbkit/resample.hpp"

namespace revkit {

AudioBuffer convolve_direct(const AudioBuffer& dry, const AudioBuffer& ir) {
    if (dry.empty() || ir.empty()) throw std::invalid_argument("convolve_direct: empty input");
    if (dry.sample_rate != ir.sample_rate)
        throw std::invalid_argument("convolve_direct: sample-rate mismatch");

    const size_t n = dry.size(), m = ir.size();
    std::vector<float> out(n + m - 1);
    for (size_t i = 0; i < out.size(); ++i) {
        const size_t k0 = i >= m - 1 ? i - (m - 1) : 0;
        const size_t k1 = std::min(i, n - 1);
        double acc = 0.0;
        for (size_t k = k0; k <= k1; ++k)
            acc += static_cast<double>(dry.samples[k]) * ir.samples[i - k];
        out[i] = static_cast<float>(acc);
    }
    return AudioBuffer(std::move(out), dry.sample_rate);
}

namespace {
size_t checked_block_size(size_t block_size) {
    if (!is_power_of_two(block_size) || block_size < 64)
        throw std::invalid_argument("ConvolutionPlan: block size must be a power of two >= 64");
    return block_size;
}
}  // namespace

ConvolutionPlan::ConvolutionPlan(const AudioBuffer& ir, size_t block_size)
    : block_(checked_block_size(block_size)),
      part_count_((ir.size() + block_size - 1) / block_size),
      ir_length_(ir.size()),
      sample_rate_(ir.sample_rate),
      fft_(2 * block_size) {
    if (ir.empty()) throw std::invalid_argument("ConvolutionPlan: empty IR");

    const size_t nfft = fft_size();
    spectra_.assign(part_count_ * nfft, {0.0, 0.0});
    for (size_t p = 0; p < part_count_; ++p) {
        std::complex<double>* spec = spectra_.data() + p * nfft;
        const size_t base = p * block_;
        const size_t count = std::min(block_, ir.size() - base);
        for (size_t i = 0; i < count; ++i) spec[i] = ir.samples[base + i];
        fft_.forward(spec);
    }
}

StreamState::StreamState(std::shared_ptr<const ConvolutionPlan> plan)
    : plan_(std::move(plan)),
      prev_block_(plan_->block_size(), 0.0),
      delay_line_(plan_->partitions() * plan_->fft_size(), {0.0, 0.0}) {}

std::vector<float> StreamState::process_block(std::span<const float> dry_block) {
    const size_t B = plan_->block_size();
    const size_t nfft = plan_->fft_size();
    const size_t P = plan_->partitions();
    if (dry_block.size() != B)
        throw std::invalid_argument("process_block: block length must equal block_size");

    // Overlap-save: transform [previous | current] and rotate it into the
    // frequency-domain delay line.
    head_ = (head_ + P - 1) % P;
    std::complex<double>* slot = delay_line_.data() + head_ * nfft;
    for (size_t i = 0; i < B; ++i) slot[i] = prev_block_[i];
    for (size_t i = 0; i < B; ++i) slot[B + i] = dry_block[i];
    plan_->fft().forward(slot);

    const size_t live = std::min<size_t>(blocks_seen_ + 1, P);
    std::vector<std::complex<double>> acc(nfft);

    // Each bin's partition sum runs in a fixed order, so the reduction is
    // bit-stable for any thread count.
#pragma omp parallel for schedule(static)
    for (int64_t k = 0; k < static_cast<int64_t>(nfft); ++k) {
        std::complex<double> s{0.0, 0.0};
        for (size_t p = 0; p < live; ++p) {
            const std::complex<double>* x = delay_line_.data() + ((head_ + p) % P) * nfft;
            s += x[k] * plan_->partition(p)[k];
        }
        acc[k] = s;
    }

    plan_->fft().inverse(acc.data());

    std::vector<float> wet(B);
    for (size_t i = 0; i < B; ++i) wet[i] = static_cast<float>(acc[B + i].real());

    for (size_t i = 0; i < B; ++i) prev_block_[i] = dry_block[i];
    ++blocks_seen_;
    return wet;
}

AudioBuffer apply_ir(const AudioBuffer& dry, const AudioBuffer& ir, NormalizePolicy policy,
                     size_t block_size) {
    if (dry.empty() || ir.empty()) throw std::invalid_argument("apply_ir: empty input");
    if (ir.peak() <= 0.0f) throw std::invalid_argument("apply_ir: silent IR");

    AudioBuffer ir_matched = ir.sample_rate == dry.sample_rate ? ir : resample(ir, dry.sample_rate);

    auto plan = std::make_shared<const ConvolutionPlan>(ir_matched, block_size);
    StreamState state(plan);

    const size_t out_len = dry.size() + ir_matched.size() - 1;
    const size_t blocks = (out_len + block_size - 1) / block_size;

    std::vector<float> out;
    out.reserve(blocks * block_size);
    std::vector<float> in_block(block_size);
    for (size_t b = 0; b < blocks; ++b) {
        for (size_t i = 0; i < block_size; ++i) {
            const size_t src = b * block_size + i;
            in_block[i] = src < dry.size() ? dry.samples[src] : 0.0f;
        }
        const std::vector<float> wet = state.process_block(in_block);
        out.insert(out.end(), wet.begin(), wet.end());
    }
    out.resize(out_len);

    AudioBuffer result(std::move(out), dry.sample_rate);
    switch (policy) {
        case NormalizePolicy::none:
            break;
        case NormalizePolicy::peak: {
            const float p = result.peak();
            if (p > 0.0f) {
                const float g = static_cast<float>(kPeakTargetLinear / p);
                for (float& v : result.samples) v *= g;
            }
            break;
        }
        case NormalizePolicy::match_input_rms: {
            const double target = dry.rms();
            const double got = result.rms();
            if (got > 0.0) {
                const float g = static_cast<float>(target / got);
                for (float& v : result.samples) v *= g;
            }
            break;
        }
    }
    return result;
}

}  // namespace revkit
