#include "reverbkit/acoustics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace revkit {

namespace {

constexpr double kLn10 = 2.302585092994046;
constexpr double kClampRatio = 1e-30;  // -300 dB

struct LineFit {
    double slope = 0.0;     // dB per second
    bool usable = false;
};

// Least-squares slope of edc_db over [begin, end] inclusive.
LineFit fit_slope(const std::vector<double>& edc_db, double dt, size_t begin, size_t end) {
    LineFit fit;
    if (end <= begin) return fit;
    const size_t n = end - begin + 1;
    double tbar = 0.0, dbar = 0.0;
    for (size_t i = begin; i <= end; ++i) {
        tbar += i * dt;
        dbar += edc_db[i];
    }
    tbar /= n;
    dbar /= n;
    double stt = 0.0, std_ = 0.0;
    for (size_t i = begin; i <= end; ++i) {
        const double dtau = i * dt - tbar;
        stt += dtau * dtau;
        std_ += dtau * (edc_db[i] - dbar);
    }
    if (stt <= 0.0) return fit;
    fit.slope = std_ / stt;
    fit.usable = fit.slope < -1e-12;
    return fit;
}

// First index where the EDC crosses below the threshold, or nullopt.
std::optional<size_t> first_below(const std::vector<double>& edc_db, double threshold) {
    for (size_t i = 0; i < edc_db.size(); ++i)
        if (edc_db[i] < threshold) return i;
    return std::nullopt;
}

// Shared tail: pick the fit span, fit, extrapolate. `strict` makes an
// unreachable -20 dB point an error instead of a fallback.
void finish_analysis(DecayAnalysis& a, bool strict) {
    const auto i5 = first_below(a.edc_db, -5.0);
    const auto i20 = first_below(a.edc_db, -20.0);

    if (!i20) {
        if (strict) throw std::runtime_error("insufficient decay range");
        a.fallback_span = true;
        a.fit_begin = i5.value_or(0);
        a.fit_end = a.edc_db.size() - 1;
    } else {
        a.fit_begin = *i5;  // -20 dB crossing implies a -5 dB crossing
        a.fit_end = *i20;
    }

    const LineFit fit = fit_slope(a.edc_db, a.time_step, a.fit_begin, a.fit_end);
    if (!fit.usable) {
        a.degenerate = true;
        a.t60 = a.time_step;
        return;
    }
    a.t60 = -60.0 / fit.slope;
}

}  // namespace

DecayAnalysis schroeder_edc(const std::vector<double>& envelope, double time_step) {
    if (envelope.empty()) throw std::invalid_argument("schroeder_edc: empty envelope");
    if (time_step <= 0.0) throw std::invalid_argument("schroeder_edc: bad time step");

    std::vector<double> suffix(envelope.size());
    double acc = 0.0;
    for (size_t i = envelope.size(); i-- > 0;) {
        const double e = envelope[i];
        if (e < 0.0 || !std::isfinite(e))
            throw std::invalid_argument("schroeder_edc: envelope must be non-negative and finite");
        acc += e * e;
        suffix[i] = acc;
    }
    const double total = suffix[0];
    if (total <= 0.0) throw std::invalid_argument("schroeder_edc: all-zero envelope");

    DecayAnalysis a;
    a.time_step = time_step;
    a.edc_db.resize(envelope.size());
    for (size_t i = 0; i < envelope.size(); ++i)
        a.edc_db[i] = 10.0 * std::log10(std::max(suffix[i] / total, kClampRatio));
    a.edc_db[0] = 0.0;
    return a;
}

DecayAnalysis estimate_t60(const AudioBuffer& ir) {
    if (ir.empty()) throw std::invalid_argument("estimate_t60: empty IR");
    if (ir.sample_rate <= 0) throw std::invalid_argument("estimate_t60: bad sample rate");

    std::vector<double> env(ir.size());
    for (size_t i = 0; i < ir.size(); ++i) env[i] = std::fabs(ir.samples[i]);

    DecayAnalysis a = schroeder_edc(env, 1.0 / ir.sample_rate);
    finish_analysis(a, /*strict=*/true);
    return a;
}

ProxyResult t60_proxy_grid(const double* x, size_t frames, size_t bins, double time_step,
                           ProxyAxis axis) {
    if (frames == 0 || bins == 0) throw std::invalid_argument("t60_proxy: empty grid");
    // The flipped axis reuses the same machinery on the transposed grid.
    const size_t T = axis == ProxyAxis::bins_per_frame ? frames : bins;
    const size_t B = axis == ProxyAxis::bins_per_frame ? bins : frames;
    auto at = [&](size_t t, size_t b) -> double {
        return axis == ProxyAxis::bins_per_frame ? x[t * bins + b] : x[b * bins + t];
    };

    // forward: exp -> per-frame sum -> square -> suffix sum -> dB
    std::vector<double> env(T, 0.0);
    for (size_t t = 0; t < T; ++t) {
        double s = 0.0;
        for (size_t b = 0; b < B; ++b) s += std::exp(at(t, b));
        env[t] = s;
    }

    std::vector<double> suffix(T);
    double acc = 0.0;
    for (size_t t = T; t-- > 0;) {
        acc += env[t] * env[t];
        suffix[t] = acc;
    }
    const double total = suffix[0];

    ProxyResult res;
    res.grad.assign(frames * bins, 0.0);

    DecayAnalysis a;
    a.time_step = time_step;
    a.edc_db.resize(T);
    if (total <= 0.0) {
        res.degenerate = true;
        res.t60 = time_step;
        return res;
    }
    std::vector<bool> clamped(T, false);
    for (size_t t = 0; t < T; ++t) {
        const double ratio = suffix[t] / total;
        clamped[t] = ratio < kClampRatio;
        a.edc_db[t] = 10.0 * std::log10(std::max(ratio, kClampRatio));
    }
    a.edc_db[0] = 0.0;
    finish_analysis(a, /*strict=*/false);
    res.fallback = a.fallback_span;
    res.degenerate = a.degenerate;
    res.t60 = a.t60;
    res.fit_begin = a.fit_begin;
    res.fit_end = a.fit_end;
    if (a.degenerate) return res;

    // Reverse pass with the fit span frozen. The slope is sum_i c_i * d_i
    // with centered weights c_i summing to zero, so the EDC normalization
    // by total energy drops out of the gradient.
    const size_t begin = a.fit_begin, end = a.fit_end;
    const size_t n = end - begin + 1;
    double tbar = 0.0;
    for (size_t i = begin; i <= end; ++i) tbar += i * time_step;
    tbar /= n;
    double stt = 0.0;
    for (size_t i = begin; i <= end; ++i) {
        const double dtau = i * time_step - tbar;
        stt += dtau * dtau;
    }
    double slope = 0.0;
    for (size_t i = begin; i <= end; ++i)
        slope += (i * time_step - tbar) / stt * a.edc_db[i];
    const double dt60_dslope = 60.0 / (slope * slope);

    // dslope/dE_j accumulated as a running prefix so each frame k gets
    // sum_{j<=k, j in span} c_j / E_j in one pass.
    const double db_scale = 10.0 / kLn10;
    std::vector<double> dslope_dE(T, 0.0);
    for (size_t j = begin; j <= end; ++j) {
        if (clamped[j]) continue;  // flat region of the clamp, no gradient
        const double c_j = (j * time_step - tbar) / stt;
        dslope_dE[j] = db_scale * c_j / suffix[j];
    }
    double run = 0.0;
    for (size_t k = 0; k < T; ++k) {
        if (k >= begin && k <= end) run += dslope_dE[k];
        const double denv = dt60_dslope * run * 2.0 * env[k];
        if (denv == 0.0) continue;
        for (size_t b = 0; b < B; ++b) {
            const size_t idx = axis == ProxyAxis::bins_per_frame ? k * bins + b : b * bins + k;
            res.grad[idx] = denv * std::exp(at(k, b));
        }
    }
    return res;
}

ProxyResult t60_proxy(const Spectrogram& logmag, ProxyAxis axis) {
    if (logmag.kind != SpectrogramKind::log_magnitude)
        throw std::invalid_argument("t60_proxy: log-magnitude spectrogram required");
    std::vector<double> x(logmag.rdata.begin(), logmag.rdata.end());
    const double dt = static_cast<double>(logmag.config.hop) / logmag.config.sample_rate;
    return t60_proxy_grid(x.data(), logmag.frames, logmag.bins, dt, axis);
}

// --- multiband ---------------------------------------------------------------

namespace {

struct Biquad {
    double b0, b1, b2, a1, a2;
    double z1 = 0.0, z2 = 0.0;

    double step(double x) {
        const double y = b0 * x + z1;
        z1 = b1 * x - a1 * y + z2;
        z2 = b2 * x - a2 * y;
        return y;
    }
};

// RBJ constant-peak-gain bandpass.
Biquad make_bandpass(double center_hz, double sample_rate, double q) {
    const double w0 = 2.0 * M_PI * center_hz / sample_rate;
    const double alpha = std::sin(w0) / (2.0 * q);
    const double a0 = 1.0 + alpha;
    Biquad s{};
    s.b0 = alpha / a0;
    s.b1 = 0.0;
    s.b2 = -alpha / a0;
    s.a1 = -2.0 * std::cos(w0) / a0;
    s.a2 = (1.0 - alpha) / a0;
    return s;
}

}  // namespace

AudioBuffer octave_bandpass(const AudioBuffer& in, double center_hz) {
    if (center_hz <= 0.0 || center_hz * std::sqrt(2.0) >= in.sample_rate / 2.0)
        throw std::invalid_argument("octave_bandpass: band does not fit under Nyquist");
    // Octave bandwidth -> Q = f0/BW = 1/(2^(1/2) - 2^(-1/2)).
    const double q = 1.0 / (std::sqrt(2.0) - 1.0 / std::sqrt(2.0));
    Biquad s1 = make_bandpass(center_hz, in.sample_rate, q);
    Biquad s2 = make_bandpass(center_hz, in.sample_rate, q);
    AudioBuffer out;
    out.sample_rate = in.sample_rate;
    out.samples.resize(in.size());
    for (size_t i = 0; i < in.size(); ++i)
        out.samples[i] = static_cast<float>(s2.step(s1.step(in.samples[i])));
    return out;
}

std::vector<double> default_octave_bands(int sample_rate) {
    std::vector<double> centers;
    for (double c = 125.0; c <= 8000.0; c *= 2.0)
        if (c * std::sqrt(2.0) < 0.499 * sample_rate) centers.push_back(c);
    return centers;
}

T60Report multiband_t60(const AudioBuffer& ir, const std::vector<double>& band_centers) {
    T60Report report;
    report.source = T60Report::Source::time_domain_ir;
    report.fullband_t60 = estimate_t60(ir).t60;

    std::vector<double> sorted = band_centers;
    std::sort(sorted.begin(), sorted.end());
    for (double c : sorted) {
        try {
            const AudioBuffer banded = octave_bandpass(ir, c);
            const DecayAnalysis a = estimate_t60(banded);
            if (!a.degenerate) report.band_t60.emplace_back(c, a.t60);
        } catch (const std::exception&) {
            // insufficient decay in this band: absent, not fatal
        }
    }
    return report;
}

std::string T60Report::serialize() const {
    std::ostringstream os;
    os.precision(6);
    os << std::fixed;
    os << "fullband " << fullband_t60 << "\n";
    for (const auto& [hz, t60] : band_t60) os << hz << " " << t60 << "\n";
    return os.str();
}

T60Report T60Report::parse(const std::string& text) {
    T60Report report;
    std::istringstream is(text);
    std::string line;
    bool have_fullband = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string head;
        ls >> head;
        if (head == "fullband") {
            ls >> report.fullband_t60;
            have_fullband = true;
        } else {
            double t60 = 0.0;
            ls >> t60;
            report.band_t60.emplace_back(std::stod(head), t60);
        }
    }
    if (!have_fullband) throw std::runtime_error("T60Report: missing fullband row");
    std::sort(report.band_t60.begin(), report.band_t60.end());
    return report;
}

double t60_percent_error(double generated, double reference) {
    return std::fabs(t60_percent_error_signed(generated, reference));
}

double t60_percent_error_signed(double generated, double reference) {
    if (reference <= 0.0) throw std::invalid_argument("t60_percent_error: reference must be positive");
    return 100.0 * (generated - reference) / reference;
}

}  // namespace revkit
