#include "reverbkit/stft.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "reverbkit/fft.hpp"

namespace revkit {

void StftConfig::validate() const {
    if (window_size <= 0 || hop <= 0) throw std::invalid_argument("StftConfig: M and R must be positive");
    if (hop > window_size) throw std::invalid_argument("StftConfig: hop must not exceed window size");
    if (sample_rate <= 0) throw std::invalid_argument("StftConfig: bad sample rate");
    if (expected_samples() < static_cast<size_t>(window_size))
        throw std::invalid_argument("StftConfig: duration shorter than one window");
}

bool StftConfig::cola_ok() const {
    // Periodic Hann overlap-adds exactly when the hop divides the window
    // and covers at least 2x overlap.
    return window_kind == WindowKind::hann && window_size % hop == 0 && hop <= window_size / 2;
}

size_t StftConfig::expected_samples() const {
    return static_cast<size_t>(std::llround(duration * sample_rate));
}

std::vector<double> make_window(WindowKind kind, int size) {
    std::vector<double> w(size);
    switch (kind) {
        case WindowKind::hann:
            // periodic form
            for (int n = 0; n < size; ++n)
                w[n] = 0.5 - 0.5 * std::cos(2.0 * M_PI * n / size);
            break;
    }
    return w;
}

Spectrogram stft(const AudioBuffer& signal, const StftConfig& config) {
    config.validate();
    const size_t n = signal.size();
    const int M = config.window_size;
    const int R = config.hop;

    size_t frames;
    int64_t first_start;  // frame 0 start relative to signal index 0
    if (config.center_pad) {
        frames = 1 + n / static_cast<size_t>(R);
        first_start = -M / 2;
    } else {
        if (n < static_cast<size_t>(M)) throw std::invalid_argument("stft: signal shorter than one window");
        frames = 1 + (n - M) / static_cast<size_t>(R);
        first_start = 0;
    }

    const std::vector<double> window = make_window(config.window_kind, M);
    const size_t bins = static_cast<size_t>(M) / 2 + 1;

    Spectrogram out;
    out.config = config;
    out.kind = SpectrogramKind::complex_linear;
    out.frames = frames;
    out.bins = bins;
    out.cdata.resize(frames * bins);

    Fft plan(static_cast<size_t>(M));

#pragma omp parallel for schedule(static)
    for (int64_t t = 0; t < static_cast<int64_t>(frames); ++t) {
        std::vector<std::complex<double>> buf(M);
        const int64_t start = first_start + t * R;
        for (int i = 0; i < M; ++i) {
            const int64_t src = start + i;
            const double x = (src >= 0 && src < static_cast<int64_t>(n)) ? signal.samples[src] : 0.0;
            buf[i] = x * window[i];
        }
        plan.forward(buf.data());
        for (size_t k = 0; k < bins; ++k)
            out.cdata[t * bins + k] = std::complex<float>(static_cast<float>(buf[k].real()),
                                                          static_cast<float>(buf[k].imag()));
    }
    return out;
}

AudioBuffer istft(const Spectrogram& spec, const StftConfig& config) {
    if (spec.kind != SpectrogramKind::complex_linear)
        throw std::invalid_argument("istft: complex spectrogram required");
    if (!config.cola_ok())
        throw std::invalid_argument("istft: window/hop pair does not satisfy COLA");
    const int M = config.window_size;
    const int R = config.hop;
    const size_t bins_full = static_cast<size_t>(M) / 2 + 1;
    if (spec.bins != bins_full)
        throw std::invalid_argument("istft: expected M/2+1 bins (restore the Nyquist bin first)");

    const std::vector<double> window = make_window(config.window_kind, M);
    const size_t frames = spec.frames;
    const size_t padded_len = (frames - 1) * R + M;

    std::vector<double> acc(padded_len, 0.0);
    std::vector<double> norm(padded_len, 0.0);

    Fft plan(static_cast<size_t>(M));
    std::vector<std::complex<double>> buf(M);
    for (size_t t = 0; t < frames; ++t) {
        for (size_t k = 0; k < bins_full; ++k) buf[k] = spec.c(t, k);
        // Hermitian mirror for the real inverse.
        for (size_t k = bins_full; k < static_cast<size_t>(M); ++k)
            buf[k] = std::conj(buf[M - k]);
        buf[0].imag(0.0);
        buf[M / 2].imag(0.0);
        plan.inverse(buf.data());
        const size_t base = t * R;
        for (int i = 0; i < M; ++i) {
            acc[base + i] += buf[i].real() * window[i];
            norm[base + i] += window[i] * window[i];
        }
    }

    const size_t offset = config.center_pad ? static_cast<size_t>(M) / 2 : 0;
    const size_t out_len = frames * static_cast<size_t>(R);
    std::vector<float> out(out_len, 0.0f);
    for (size_t i = 0; i < out_len; ++i) {
        const size_t p = offset + i;
        if (p < padded_len && norm[p] > 1e-8)
            out[i] = static_cast<float>(acc[p] / norm[p]);
    }
    return AudioBuffer(std::move(out), config.sample_rate);
}

Spectrogram log_magnitude(const Spectrogram& spec) {
    if (spec.kind != SpectrogramKind::complex_linear)
        throw std::invalid_argument("log_magnitude: complex spectrogram required");
    Spectrogram out;
    out.config = spec.config;
    out.kind = SpectrogramKind::log_magnitude;
    out.frames = spec.frames;
    out.bins = spec.bins;
    out.rdata.resize(spec.cdata.size());
    for (size_t i = 0; i < spec.cdata.size(); ++i) {
        const double mag = std::abs(std::complex<double>(spec.cdata[i]));
        out.rdata[i] = static_cast<float>(std::log(std::max(mag, kLogFloor)));
    }
    return out;
}

Spectrogram trim_nyquist(const Spectrogram& spec) {
    const size_t full = static_cast<size_t>(spec.config.window_size) / 2 + 1;
    if (spec.bins != full)
        throw std::invalid_argument("trim_nyquist: spectrogram already trimmed (or bins inconsistent)");
    Spectrogram out;
    out.config = spec.config;
    out.kind = spec.kind;
    out.frames = spec.frames;
    out.bins = spec.bins - 1;
    if (spec.kind == SpectrogramKind::complex_linear) {
        out.cdata.resize(out.frames * out.bins);
        for (size_t t = 0; t < spec.frames; ++t)
            std::memcpy(&out.cdata[t * out.bins], &spec.cdata[t * spec.bins],
                        out.bins * sizeof(std::complex<float>));
    } else {
        out.rdata.resize(out.frames * out.bins);
        for (size_t t = 0; t < spec.frames; ++t)
            std::memcpy(&out.rdata[t * out.bins], &spec.rdata[t * spec.bins], out.bins * sizeof(float));
    }
    return out;
}

// --- container ---------------------------------------------------------------

namespace {
constexpr char kMagic[4] = {'R', 'V', 'S', 'P'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<char*>(b), 4);
}
uint32_t get_u32(std::istream& is) {
    unsigned char b[4];
    is.read(reinterpret_cast<char*>(b), 4);
    return uint32_t(b[0]) | uint32_t(b[1]) << 8 | uint32_t(b[2]) << 16 | uint32_t(b[3]) << 24;
}
}  // namespace

void save_spectrogram(const std::string& path, const Spectrogram& spec) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot create spectrogram file: " + path);
    f.write(kMagic, 4);
    put_u32(f, kVersion);
    const uint8_t kind = static_cast<uint8_t>(spec.kind);
    f.write(reinterpret_cast<const char*>(&kind), 1);
    put_u32(f, static_cast<uint32_t>(spec.config.window_size));
    put_u32(f, static_cast<uint32_t>(spec.config.hop));
    put_u32(f, static_cast<uint32_t>(spec.config.sample_rate));
    put_u32(f, static_cast<uint32_t>(spec.frames));
    put_u32(f, static_cast<uint32_t>(spec.bins));
    if (spec.kind == SpectrogramKind::complex_linear)
        f.write(reinterpret_cast<const char*>(spec.cdata.data()),
                static_cast<std::streamsize>(spec.cdata.size() * sizeof(std::complex<float>)));
    else
        f.write(reinterpret_cast<const char*>(spec.rdata.data()),
                static_cast<std::streamsize>(spec.rdata.size() * sizeof(float)));
    if (!f) throw std::runtime_error("short write to " + path);
}

Spectrogram load_spectrogram(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open spectrogram file: " + path);
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("bad spectrogram magic in " + path);
    const uint32_t version = get_u32(f);
    if (version != kVersion) throw std::runtime_error("unsupported spectrogram version in " + path);
    uint8_t kind = 0;
    f.read(reinterpret_cast<char*>(&kind), 1);

    Spectrogram spec;
    spec.kind = static_cast<SpectrogramKind>(kind);
    spec.config.window_size = static_cast<int>(get_u32(f));
    spec.config.hop = static_cast<int>(get_u32(f));
    spec.config.sample_rate = static_cast<int>(get_u32(f));
    spec.frames = get_u32(f);
    spec.bins = get_u32(f);
    spec.config.duration =
        static_cast<double>(spec.frames * spec.config.hop) / spec.config.sample_rate;

    const size_t count = spec.frames * spec.bins;
    if (spec.kind == SpectrogramKind::complex_linear) {
        spec.cdata.resize(count);
        f.read(reinterpret_cast<char*>(spec.cdata.data()),
               static_cast<std::streamsize>(count * sizeof(std::complex<float>)));
    } else {
        spec.rdata.resize(count);
        f.read(reinterpret_cast<char*>(spec.rdata.data()),
               static_cast<std::streamsize>(count * sizeof(float)));
    }
    if (!f) throw std::runtime_error("truncated spectrogram file: " + path);
    return spec;
}

// --- presets -----------------------------------------------------------------

StftConfig Preset::stft_config() const {
    StftConfig cfg;
    cfg.window_size = window_size;
    cfg.hop = hop;
    cfg.window_kind = WindowKind::hann;
    cfg.sample_rate = sample_rate;
    cfg.duration = duration();
    cfg.center_pad = true;
    return cfg;
}

Preset paper_preset() {
    Preset p;
    p.name = "paper";
    p.sample_rate = 22050;
    p.samples = 130977;  // 5.94 s
    p.window_size = 1024;
    p.hop = 256;
    p.image_size = 224;
    p.feature_dim = 365;
    p.noise_dim = 147;
    return p;
}

Preset toy_preset() {
    Preset p;
    p.name = "toy";
    p.sample_rate = 22050;
    p.samples = 16256;
    p.window_size = 256;
    p.hop = 128;
    p.image_size = 64;
    p.feature_dim = 96;
    p.noise_dim = 32;
    return p;
}

Preset preset_by_name(const std::string& name) {
    if (name == "paper") return paper_preset();
    if (name == "toy") return toy_preset();
    throw std::invalid_argument("unknown preset: " + name);
}

}  // namespace revkit
