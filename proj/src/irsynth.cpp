#include "reverbkit/irsynth.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "reverbkit/acoustics.hpp"
#include "reverbkit/rng.hpp"

namespace revkit {

namespace {

// Rebuilds the full complex spectrogram (M/2+1 bins) from trimmed
// magnitudes and per-bin phases; Nyquist restored as zero.
Spectrogram assemble_complex(const Spectrogram& logmag, const std::vector<double>& phases) {
    Spectrogram spec;
    spec.config = logmag.config;
    spec.kind = SpectrogramKind::complex_linear;
    spec.frames = logmag.frames;
    spec.bins = logmag.bins + 1;
    spec.cdata.assign(spec.frames * spec.bins, {0.f, 0.f});
    for (size_t t = 0; t < logmag.frames; ++t)
        for (size_t b = 0; b < logmag.bins; ++b) {
            const double mag = std::exp(static_cast<double>(logmag.r(t, b)));
            const double ph = phases[t * logmag.bins + b];
            spec.c(t, b) = std::complex<float>(static_cast<float>(mag * std::cos(ph)),
                                               static_cast<float>(mag * std::sin(ph)));
        }
    return spec;
}

AudioBuffer render_trimmed(const Spectrogram& complex_spec) {
    AudioBuffer out = istft(complex_spec, complex_spec.config);
    const size_t target = complex_spec.config.expected_samples();
    if (out.size() > target) out.samples.resize(target);
    while (out.size() < target) out.samples.push_back(0.0f);
    return out;
}

}  // namespace

AudioBuffer spectrogram_to_ir(const Spectrogram& logmag, PhaseMode mode, uint64_t seed,
                              int iterations) {
    if (logmag.kind != SpectrogramKind::log_magnitude)
        throw std::invalid_argument("spectrogram_to_ir: log-magnitude spectrogram required");
    for (float v : logmag.rdata)
        if (!std::isfinite(v)) throw std::invalid_argument("spectrogram_to_ir: non-finite magnitude");

    Rng rng(mix_seed(seed, 0x5eed));
    std::vector<double> phases(logmag.frames * logmag.bins);
    for (size_t t = 0; t < logmag.frames; ++t)
        for (size_t b = 0; b < logmag.bins; ++b) {
            // DC of a real frame must be real; random sign instead of phase.
            const double ph = b == 0 ? (rng.uniform() < 0.5 ? 0.0 : M_PI) : rng.uniform(0.0, 2.0 * M_PI);
            phases[t * logmag.bins + b] = ph;
        }

    Spectrogram spec = assemble_complex(logmag, phases);
    if (mode == PhaseMode::random) return render_trimmed(spec);

    // Iterative magnitude projection: alternate inversion and re-analysis,
    // keeping the target magnitudes and the re-analyzed phases.
    for (int it = 0; it < iterations; ++it) {
        const AudioBuffer audio = render_trimmed(spec);
        const Spectrogram reana = stft(audio, logmag.config);
        for (size_t t = 0; t < logmag.frames; ++t)
            for (size_t b = 0; b < logmag.bins; ++b) {
                const std::complex<double> z = reana.c(t, b);
                const double az = std::abs(z);
                const double mag = std::exp(static_cast<double>(logmag.r(t, b)));
                if (az > 1e-30) {
                    const std::complex<double> u = z / az * mag;
                    spec.c(t, b) = std::complex<float>(static_cast<float>(u.real()),
                                                       static_cast<float>(u.imag()));
                }
            }
    }
    return render_trimmed(spec);
}

double spectral_convergence(const Spectrogram& logmag, const AudioBuffer& audio) {
    const Spectrogram reana = trim_nyquist(stft(audio, logmag.config));
    if (reana.frames != logmag.frames || reana.bins != logmag.bins)
        throw std::invalid_argument("spectral_convergence: grid mismatch");
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < logmag.rdata.size(); ++i) {
        const double target = std::exp(static_cast<double>(logmag.rdata[i]));
        const double got = std::abs(std::complex<double>(reana.cdata[i]));
        num += (got - target) * (got - target);
        den += target * target;
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

void ShapedNoiseParams::validate() const {
    if (band_t60.empty()) throw std::invalid_argument("ShapedNoiseParams: no bands");
    for (const auto& [hz, t60] : band_t60) {
        (void)hz;
        if (t60 <= 0.0) throw std::invalid_argument("ShapedNoiseParams: T60 must be positive");
    }
    if (duration <= 0.0) throw std::invalid_argument("ShapedNoiseParams: duration must be positive");
    if (sample_rate <= 0) throw std::invalid_argument("ShapedNoiseParams: bad sample rate");
    if (onset_delay < 0.0 || onset_delay >= duration)
        throw std::invalid_argument("ShapedNoiseParams: onset delay outside [0, duration)");
}

AudioBuffer shaped_noise_ir(const ShapedNoiseParams& params) {
    params.validate();
    double max_t60 = 0.0;
    for (const auto& [hz, t60] : params.band_t60) max_t60 = std::max(max_t60, t60);
    if (params.duration < 2.0 * max_t60)
        std::fprintf(stderr, "shaped_noise_ir: duration %.3fs < 2 x max T60 %.3fs\n", params.duration,
                     max_t60);

    const size_t n = static_cast<size_t>(std::llround(params.duration * params.sample_rate));
    const size_t onset = static_cast<size_t>(std::llround(params.onset_delay * params.sample_rate));
    std::vector<double> reverb(n, 0.0);

    for (size_t bi = 0; bi < params.band_t60.size(); ++bi) {
        const auto [center, t60] = params.band_t60[bi];
        const double tau = t60_to_tau(t60);
        Rng rng(mix_seed(params.seed, bi));

        AudioBuffer band;
        band.sample_rate = params.sample_rate;
        band.samples.resize(n, 0.0f);
        for (size_t i = onset; i < n; ++i) {
            const double t = static_cast<double>(i - onset) / params.sample_rate;
            band.samples[i] = static_cast<float>(rng.normal() * std::exp(-t / tau));
        }
        if (center > 0.0) band = octave_bandpass(band, center);
        for (size_t i = 0; i < n; ++i) reverb[i] += band.samples[i];
    }

    double peak = 0.0;
    for (double v : reverb) peak = std::max(peak, std::fabs(v));
    const double direct = peak * std::pow(10.0, params.direct_to_reverb_db / 20.0);

    AudioBuffer out;
    out.sample_rate = params.sample_rate;
    out.samples.resize(n);
    for (size_t i = 0; i < n; ++i) out.samples[i] = static_cast<float>(reverb[i]);
    out.samples[onset] += static_cast<float>(direct);
    return out;
}

std::string ShapedNoiseParams::serialize() const {
    std::ostringstream os;
    os.precision(12);
    os << "sample_rate " << sample_rate << "\n";
    os << "duration " << duration << "\n";
    os << "onset_delay " << onset_delay << "\n";
    os << "direct_to_reverb_db " << direct_to_reverb_db << "\n";
    os << "seed " << seed << "\n";
    for (const auto& [hz, t60] : band_t60) os << "band " << hz << " " << t60 << "\n";
    return os.str();
}

ShapedNoiseParams ShapedNoiseParams::parse(const std::string& text) {
    ShapedNoiseParams p;
    p.band_t60.clear();
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "sample_rate") ls >> p.sample_rate;
        else if (key == "duration") ls >> p.duration;
        else if (key == "onset_delay") ls >> p.onset_delay;
        else if (key == "direct_to_reverb_db") ls >> p.direct_to_reverb_db;
        else if (key == "seed") ls >> p.seed;
        else if (key == "band") {
            double hz = 0.0, t60 = 0.0;
            ls >> hz >> t60;
            p.band_t60.emplace_back(hz, t60);
        } else {
            throw std::runtime_error("ShapedNoiseParams: unknown key '" + key + "'");
        }
    }
    p.validate();
    return p;
}

}  // namespace revkit
