#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "reverbkit/audio.hpp"

namespace revkit {

/// Linear-magnitude floor applied before taking logs.
constexpr double kLogFloor = 1e-8;

enum class WindowKind : uint8_t { hann = 0 };

struct StftConfig {
    int window_size = 1024;  // M
    int hop = 256;           // R
    WindowKind window_kind = WindowKind::hann;
    int sample_rate = 22050;
    double duration = 5.94;  // seconds of signal this config is meant for
    bool center_pad = true;

    void validate() const;

    /// True when the (window, hop) pair supports exact overlap-add inversion.
    bool cola_ok() const;

    size_t expected_samples() const;
};

enum class SpectrogramKind : uint8_t { complex_linear = 0, log_magnitude = 1 };

/// Time-frequency grid, frames x bins row-major, carrying the STFT config
/// it was produced with. Either complex (linear) or real (log-magnitude).
struct Spectrogram {
    StftConfig config;
    SpectrogramKind kind = SpectrogramKind::complex_linear;
    size_t frames = 0;
    size_t bins = 0;
    std::vector<std::complex<float>> cdata;  // complex_linear
    std::vector<float> rdata;                // log_magnitude

    std::complex<float>& c(size_t frame, size_t bin) { return cdata[frame * bins + bin]; }
    std::complex<float> c(size_t frame, size_t bin) const { return cdata[frame * bins + bin]; }
    float& r(size_t frame, size_t bin) { return rdata[frame * bins + bin]; }
    float r(size_t frame, size_t bin) const { return rdata[frame * bins + bin]; }
};

std::vector<double> make_window(WindowKind kind, int size);

/// Windowed STFT. With center padding the signal is zero-padded by M/2 on
/// both sides and the frame count is exactly 1 + floor(N/R).
Spectrogram stft(const AudioBuffer& signal, const StftConfig& config);

/// Weighted overlap-add inverse. Output length is frames * hop; for
/// spec = stft(x) the output matches x on the original support.
AudioBuffer istft(const Spectrogram& spec, const StftConfig& config);

/// entry = ln(max(|X|, kLogFloor))
Spectrogram log_magnitude(const Spectrogram& spec);

/// Drops the Nyquist bin (bins: M/2+1 -> M/2). Retained bins are unchanged.
Spectrogram trim_nyquist(const Spectrogram& spec);

// --- binary container -------------------------------------------------------
//
// Little-endian layout: magic "RVSP", u32 version, u8 kind, u32 M, u32 R,
// u32 sample_rate, u32 frames, u32 bins, then row-major float32 data
// (re/im interleaved for complex spectrograms).

void save_spectrogram(const std::string& path, const Spectrogram& spec);
Spectrogram load_spectrogram(const std::string& path);

// --- presets -----------------------------------------------------------------

/// Named scale preset tying together the audio geometry and the model
/// dimensions that depend on it.
struct Preset {
    std::string name;
    int sample_rate = 22050;
    size_t samples = 0;    // truncation length in samples
    int window_size = 0;   // M
    int hop = 0;           // R
    int image_size = 0;    // square scene input edge
    int feature_dim = 0;   // encoder output length F
    int noise_dim = 0;     // appended noise length Z

    double duration() const { return static_cast<double>(samples) / sample_rate; }
    int latent_dim() const { return feature_dim + noise_dim; }
    StftConfig stft_config() const;
    size_t spec_frames() const { return 1 + samples / static_cast<size_t>(hop); }
    size_t spec_bins() const { return static_cast<size_t>(window_size) / 2; }  // after trim
};

/// 22050 Hz, 5.94 s, M=1024, R=256 -> 512x512 after the Nyquist trim.
Preset paper_preset();

/// 22050 Hz, 16256 samples, M=256, R=128 -> 128x128 after the Nyquist trim.
Preset toy_preset();

Preset preset_by_name(const std::string& name);

}  // namespace revkit
