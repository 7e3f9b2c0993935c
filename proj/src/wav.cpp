#include "reverbkit/wav.hpp"

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace revkit {

namespace {

uint32_t rd_u32(const unsigned char* p) {
    return uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 | uint32_t(p[3]) << 24;
}
uint16_t rd_u16(const unsigned char* p) { return uint16_t(p[0]) | uint16_t(p[1]) << 8; }

void wr_u32(std::ostream& os, uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    os.write(reinterpret_cast<char*>(b), 4);
}
void wr_u16(std::ostream& os, uint16_t v) {
    unsigned char b[2] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8)};
    os.write(reinterpret_cast<char*>(b), 2);
}

}  // namespace

WavData read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open WAV file: " + path);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                     std::istreambuf_iterator<char>());
    if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
        std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
        throw std::runtime_error("not a RIFF/WAVE file: " + path);

    uint16_t audio_format = 0, channels = 0, bits = 0;
    uint32_t sample_rate = 0;
    const unsigned char* data = nullptr;
    size_t data_len = 0;

    size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const char* id = reinterpret_cast<const char*>(&bytes[pos]);
        const uint32_t len = rd_u32(&bytes[pos + 4]);
        const size_t body = pos + 8;
        if (body + len > bytes.size() && std::memcmp(id, "data", 4) != 0)
            throw std::runtime_error("truncated WAV chunk in " + path);
        if (std::memcmp(id, "fmt ", 4) == 0) {
            if (len < 16) throw std::runtime_error("short fmt chunk in " + path);
            audio_format = rd_u16(&bytes[body]);
            channels = rd_u16(&bytes[body + 2]);
            sample_rate = rd_u32(&bytes[body + 4]);
            bits = rd_u16(&bytes[body + 14]);
            if (audio_format == 0xFFFE && len >= 40)  // WAVE_FORMAT_EXTENSIBLE
                audio_format = rd_u16(&bytes[body + 24]);
        } else if (std::memcmp(id, "data", 4) == 0) {
            data = &bytes[body];
            data_len = std::min<size_t>(len, bytes.size() - body);
        }
        pos = body + len + (len & 1);  // chunks are word-aligned
    }
    if (!data || channels == 0 || sample_rate == 0)
        throw std::runtime_error("missing fmt/data chunk in " + path);

    const size_t bytes_per_sample = bits / 8;
    if (bytes_per_sample == 0) throw std::runtime_error("bad bit depth in " + path);
    const size_t frames = data_len / (bytes_per_sample * channels);

    WavData out;
    out.sample_rate = static_cast<int>(sample_rate);
    out.channels.assign(channels, std::vector<float>(frames));

    if (audio_format == 1 && bits == 16) {
        for (size_t n = 0; n < frames; ++n)
            for (size_t c = 0; c < channels; ++c) {
                const unsigned char* p = data + (n * channels + c) * 2;
                const int16_t v = static_cast<int16_t>(rd_u16(p));
                out.channels[c][n] = static_cast<float>(v) / 32768.0f;
            }
    } else if (audio_format == 1 && bits == 24) {
        for (size_t n = 0; n < frames; ++n)
            for (size_t c = 0; c < channels; ++c) {
                const unsigned char* p = data + (n * channels + c) * 3;
                int32_t v = int32_t(p[0]) | int32_t(p[1]) << 8 | int32_t(p[2]) << 16;
                if (v & 0x800000) v |= ~0xFFFFFF;  // sign extend
                out.channels[c][n] = static_cast<float>(v) / 8388608.0f;
            }
    } else if (audio_format == 3 && bits == 32) {
        for (size_t n = 0; n < frames; ++n)
            for (size_t c = 0; c < channels; ++c) {
                float v;
                std::memcpy(&v, data + (n * channels + c) * 4, 4);
                out.channels[c][n] = v;
            }
    } else {
        throw std::runtime_error("unsupported WAV encoding (format " + std::to_string(audio_format) +
                                 ", " + std::to_string(bits) + " bit) in " + path);
    }
    return out;
}

AudioBuffer read_wav_mono(const std::string& path) {
    WavData w = read_wav(path);
    if (w.channels.size() != 1)
        throw std::runtime_error("expected mono WAV, got " + std::to_string(w.channels.size()) +
                                 " channels: " + path);
    return AudioBuffer(std::move(w.channels[0]), w.sample_rate);
}

void write_wav(const std::string& path, const AudioBuffer& audio, WavFormat format) {
    if (audio.sample_rate <= 0) throw std::invalid_argument("write_wav: bad sample rate");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot create WAV file: " + path);

    const uint16_t channels = 1;
    uint16_t bits = 0, fmt = 0;
    switch (format) {
        case WavFormat::pcm16: bits = 16; fmt = 1; break;
        case WavFormat::pcm24: bits = 24; fmt = 1; break;
        case WavFormat::float32: bits = 32; fmt = 3; break;
    }
    const uint32_t byte_rate = audio.sample_rate * channels * bits / 8;
    const uint32_t data_len = static_cast<uint32_t>(audio.samples.size() * bits / 8);

    f.write("RIFF", 4);
    wr_u32(f, 36 + data_len);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    wr_u32(f, 16);
    wr_u16(f, fmt);
    wr_u16(f, channels);
    wr_u32(f, static_cast<uint32_t>(audio.sample_rate));
    wr_u32(f, byte_rate);
    wr_u16(f, channels * bits / 8);
    wr_u16(f, bits);
    f.write("data", 4);
    wr_u32(f, data_len);

    for (float v : audio.samples) {
        switch (format) {
            case WavFormat::pcm16: {
                const float c = std::clamp(v, -1.0f, 1.0f);
                const int16_t s = static_cast<int16_t>(std::lrintf(c * 32767.0f));
                wr_u16(f, static_cast<uint16_t>(s));
                break;
            }
            case WavFormat::pcm24: {
                const float c = std::clamp(v, -1.0f, 1.0f);
                const int32_t s = static_cast<int32_t>(std::lrintf(c * 8388607.0f));
                unsigned char b[3] = {static_cast<unsigned char>(s), static_cast<unsigned char>(s >> 8),
                                      static_cast<unsigned char>(s >> 16)};
                f.write(reinterpret_cast<char*>(b), 3);
                break;
            }
            case WavFormat::float32: {
                uint32_t u;
                std::memcpy(&u, &v, 4);
                wr_u32(f, u);
                break;
            }
        }
    }
    if (!f) throw std::runtime_error("short write to " + path);
}

}  // namespace revkit
