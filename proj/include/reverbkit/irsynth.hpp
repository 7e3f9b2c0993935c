#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "reverbkit/audio.hpp"
#include "reverbkit/stft.hpp"

namespace revkit {

enum class PhaseMode { random, iterative };

/// Renders a trimmed log-magnitude spectrogram to audio. Random mode draws
/// one phase per bin (seeded); iterative mode refines with a fixed number
/// of magnitude-projection rounds. The Nyquist bin removed by the forward
/// path is restored as zero. Output is trimmed to the config's duration.
AudioBuffer spectrogram_to_ir(const Spectrogram& logmag, PhaseMode mode, uint64_t seed = 0,
                              int iterations = 32);

/// || |stft(audio)| - exp(logmag) ||_2 / || exp(logmag) ||_2 over the
/// trimmed grid; diagnostic for phase-reconstruction quality.
double spectral_convergence(const Spectrogram& logmag, const AudioBuffer& audio);

/// Parametric reference IR: per band, white Gaussian noise shaped by
/// exp(-t/tau) with tau = T60/(3 ln 10), bandpassed and summed, plus a
/// direct-path impulse. center_hz <= 0 marks a fullband (unfiltered) band.
struct ShapedNoiseParams {
    std::vector<std::pair<double, double>> band_t60;  // (center Hz, T60 s)
    double direct_to_reverb_db = 0.0;
    double onset_delay = 0.0;  // seconds
    double duration = 1.0;     // seconds
    int sample_rate = 22050;
    uint64_t seed = 0;

    void validate() const;
    std::string serialize() const;
    static ShapedNoiseParams parse(const std::string& text);
};

/// tau for a 60 dB amplitude decay: T60 = 3 ln(10) tau.
inline double t60_to_tau(double t60) { return t60 / (3.0 * 2.302585092994046); }

AudioBuffer shaped_noise_ir(const ShapedNoiseParams& params);

}  // namespace revkit
