#pragma once

#include "reverbkit/audio.hpp"

namespace revkit {

/// Band-limited sample-rate conversion with a polyphase windowed-sinc
/// kernel (Blackman-Harris window, 24 zero crossings per side). Output
/// length is round(n * target / source) and the dominant spectral content
/// survives within one FFT bin.
AudioBuffer resample(const AudioBuffer& signal, int target_rate);

}  // namespace revkit
