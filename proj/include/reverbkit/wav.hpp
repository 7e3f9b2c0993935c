#pragma once

#include <string>
#include <vector>

#include "reverbkit/audio.hpp"

namespace revkit {

enum class WavFormat { pcm16, pcm24, float32 };

/// Multichannel WAV contents; channels[c][n] in [-1, 1] for PCM sources.
struct WavData {
    std::vector<std::vector<float>> channels;
    int sample_rate = 0;

    size_t frames() const { return channels.empty() ? 0 : channels[0].size(); }
};

/// Reads PCM16, PCM24 or IEEE float32 WAV. Throws std::runtime_error on
/// malformed files or unsupported encodings.
WavData read_wav(const std::string& path);

/// Reads a WAV that must be mono.
AudioBuffer read_wav_mono(const std::string& path);

void write_wav(const std::string& path, const AudioBuffer& audio,
               WavFormat format = WavFormat::float32);

}  // namespace revkit
