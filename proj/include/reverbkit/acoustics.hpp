#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reverbkit/audio.hpp"
#include "reverbkit/stft.hpp"

namespace revkit {

/// Energy decay curve plus the T60 derived from it. The EDC is normalized
/// (starts at exactly 0 dB) and non-increasing; values are clamped at
/// -300 dB where the integrated tail energy underflows.
struct DecayAnalysis {
    std::vector<double> edc_db;
    double time_step = 0.0;  // seconds per EDC sample
    double t60 = 0.0;
    size_t fit_begin = 0;  // frozen regression span, inclusive
    size_t fit_end = 0;
    bool degenerate = false;     // decay immediate; t60 pinned to one time step
    bool fallback_span = false;  // -5/-20 dB span unreachable, full-span fit used

    /// (time, dB) endpoints of the span the line was fitted over.
    std::pair<std::pair<double, double>, std::pair<double, double>> fit_points() const {
        return {{fit_begin * time_step, edc_db[fit_begin]}, {fit_end * time_step, edc_db[fit_end]}};
    }
};

constexpr double kEdcClampDb = -300.0;

/// Schroeder backward integration of the squared envelope.
/// edc_db[n] = 10*log10(sum_{k>=n} env[k]^2 / sum_k env[k]^2).
DecayAnalysis schroeder_edc(const std::vector<double>& envelope, double time_step);

/// Backward-integrates |ir|^2, fits a least-squares line to the EDC over
/// the [-5, -20] dB span and extrapolates to -60 dB. Throws
/// std::runtime_error("insufficient decay range") when the decay never
/// reaches -20 dB inside the buffer.
DecayAnalysis estimate_t60(const AudioBuffer& ir);

enum class ProxyAxis {
    bins_per_frame,  // envelope[t] = sum_b exp(x[t,b]); the working reading
    frames_per_bin,  // the literal "sum along the time axis"; diagnostic only
};

/// Differentiable fullband T60 read directly off a log-magnitude
/// spectrogram: exp -> per-frame sum -> square -> backward integration ->
/// dB -> line fit over [-5, -20] -> extrapolate to -60 dB. The gradient is
/// exact for the frozen fit span (no gradient through index selection).
/// Never throws on decay problems; when the -20 dB point is unreachable it
/// fits through the last frame instead and sets `fallback`.
struct ProxyResult {
    double t60 = 0.0;
    std::vector<double> grad;  // d t60 / d x, frames*bins row-major
    size_t fit_begin = 0;
    size_t fit_end = 0;
    bool fallback = false;
    bool degenerate = false;
};

ProxyResult t60_proxy_grid(const double* x, size_t frames, size_t bins, double time_step,
                           ProxyAxis axis = ProxyAxis::bins_per_frame);

ProxyResult t60_proxy(const Spectrogram& logmag, ProxyAxis axis = ProxyAxis::bins_per_frame);

/// Octave-band T60 breakdown. Bands whose decay range is insufficient are
/// reported absent rather than failing the report.
struct T60Report {
    enum class Source { time_domain_ir, log_spectrogram_proxy };
    double fullband_t60 = 0.0;
    std::vector<std::pair<double, double>> band_t60;  // (center Hz, t60 s), sorted
    Source source = Source::time_domain_ir;

    std::string serialize() const;
    static T60Report parse(const std::string& text);
};

/// Octave centers 125 Hz..8 kHz, truncated to bands that fit under Nyquist.
std::vector<double> default_octave_bands(int sample_rate);

T60Report multiband_t60(const AudioBuffer& ir, const std::vector<double>& band_centers);

/// 4th-order octave bandpass (two cascaded biquads), used by multiband_t60
/// and the shaped-noise generator.
AudioBuffer octave_bandpass(const AudioBuffer& in, double center_hz);

/// 100 * |generated - reference| / reference.
double t60_percent_error(double generated, double reference);
/// 100 * (generated - reference) / reference, for error statistics.
double t60_percent_error_signed(double generated, double reference);

}  // namespace revkit
