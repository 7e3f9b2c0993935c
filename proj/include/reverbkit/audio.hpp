#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace revkit {

/// Mono sample sequence plus its sample rate. Samples are nominally in
/// [-1, 1] but nothing enforces that; IR tails and intermediate products
/// routinely exceed it.
struct AudioBuffer {
    std::vector<float> samples;
    int sample_rate = 0;

    AudioBuffer() = default;
    AudioBuffer(std::vector<float> s, int rate) : samples(std::move(s)), sample_rate(rate) {}

    size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    double duration() const {
        return sample_rate > 0 ? static_cast<double>(samples.size()) / sample_rate : 0.0;
    }

    void validate() const {
        if (sample_rate <= 0) throw std::invalid_argument("AudioBuffer: sample_rate must be positive");
        for (float v : samples)
            if (!std::isfinite(v)) throw std::invalid_argument("AudioBuffer: non-finite sample");
    }

    float peak() const {
        float p = 0.f;
        for (float v : samples) p = std::max(p, std::fabs(v));
        return p;
    }

    double rms() const {
        if (samples.empty()) return 0.0;
        double acc = 0.0;
        for (float v : samples) acc += static_cast<double>(v) * v;
        return std::sqrt(acc / samples.size());
    }
};

}  // namespace revkit
