#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "reverbkit/audio.hpp"
#include "reverbkit/fft.hpp"

namespace revkit {

/// Full linear convolution, length n + m - 1. O(n*m) single-threaded
/// reference; the partitioned engine below is checked against it.
AudioBuffer convolve_direct(const AudioBuffer& dry, const AudioBuffer& ir);

/// Frequency-domain IR partitions for uniform-partition overlap-save
/// streaming. Immutable after construction and shareable across streams.
class ConvolutionPlan {
public:
    /// Splits the IR into block_size chunks, each zero-padded to 2*block_size
    /// and transformed. block_size must be a power of two >= 64.
    ConvolutionPlan(const AudioBuffer& ir, size_t block_size);

    size_t block_size() const { return block_; }
    size_t partitions() const { return part_count_; }
    size_t ir_length() const { return ir_length_; }
    int sample_rate() const { return sample_rate_; }
    size_t fft_size() const { return 2 * block_; }
    const Fft& fft() const { return fft_; }
    /// Spectrum of partition p (fft_size() bins).
    const std::complex<double>* partition(size_t p) const { return spectra_.data() + p * fft_size(); }

private:
    size_t block_;
    size_t part_count_;
    size_t ir_length_;
    int sample_rate_;
    Fft fft_;
    std::vector<std::complex<double>> spectra_;
};

/// Streaming state for one convolution run. Single-owner: one logical
/// stream advances it; the shared plan stays read-only.
class StreamState {
public:
    explicit StreamState(std::shared_ptr<const ConvolutionPlan> plan);

    /// Consumes exactly block_size dry samples, emits block_size wet samples.
    /// Concatenated outputs equal the direct-convolution prefix. Feed zero
    /// blocks after the signal ends to drain the reverb tail.
    std::vector<float> process_block(std::span<const float> dry_block);

    const ConvolutionPlan& plan() const { return *plan_; }

private:
    std::shared_ptr<const ConvolutionPlan> plan_;
    std::vector<double> prev_block_;                 // previous B input samples
    std::vector<std::complex<double>> delay_line_;   // ring of input spectra
    size_t head_ = 0;                                // slot of the newest spectrum
    size_t blocks_seen_ = 0;
};

enum class NormalizePolicy { none, peak, match_input_rms };

/// -1 dBFS ceiling used by NormalizePolicy::peak.
constexpr double kPeakTargetLinear = 0.8912509381337456;

/// Partitioned convolution of a dry signal with an IR. Resamples the IR if
/// the rates differ; throws on a silent IR. Default leveling: peak at -1 dBFS.
AudioBuffer apply_ir(const AudioBuffer& dry, const AudioBuffer& ir,
                     NormalizePolicy policy = NormalizePolicy::peak, size_t block_size = 1024);

}  // namespace revkit
