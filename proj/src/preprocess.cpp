#include "csd/preprocess.hpp"

#include <cmath>
#include <numbers>

#include "csd/error.hpp"

namespace csd {

namespace {

// Larger root magnitude of z^2 + a1 z + a2.
double pole_radius(const BiquadSection& s) {
    const std::complex<double> disc = std::sqrt(std::complex<double>(s.a1 * s.a1 - 4.0 * s.a2, 0.0));
    const std::complex<double> r1 = (-s.a1 + disc) / 2.0;
    const std::complex<double> r2 = (-s.a1 - disc) / 2.0;
    return std::max(std::abs(r1), std::abs(r2));
}

}  // namespace

IIRFilter::IIRFilter(std::vector<BiquadSection> sections, int order, double cutoff_hz, double sample_rate_hz)
    : sections_(std::move(sections)), order_(order), cutoff_hz_(cutoff_hz), sample_rate_hz_(sample_rate_hz) {
    if (sections_.empty()) throw_numeric("filter has no sections");
    double dc = 1.0;
    for (const BiquadSection& s : sections_) {
        if (pole_radius(s) >= 1.0 - 1e-9) throw_numeric("unstable filter section (pole on or outside unit circle)");
        dc *= (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    }
    if (std::abs(dc - 1.0) > 1e-6) throw_numeric("cascade DC gain deviates from 1");
}

std::complex<double> IIRFilter::frequency_response(double freq_hz) const {
    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz_;
    const std::complex<double> z1 = std::polar(1.0, -w);
    const std::complex<double> z2 = z1 * z1;
    std::complex<double> h = 1.0;
    for (const BiquadSection& s : sections_)
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    return h;
}

IIRFilter design_butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz) {
    if (order <= 0 || order % 2 != 0) throw_numeric("unsupported order: need a positive even filter order");
    if (!(sample_rate_hz > 0.0)) throw_numeric("sample rate must be positive");
    if (!(cutoff_hz > 0.0) || cutoff_hz >= sample_rate_hz / 2.0)
        throw_numeric("cutoff must lie in (0, Nyquist)");

    // Prewarp so the bilinear transform lands the -3 dB point exactly on cutoff_hz.
    const double fs2 = 2.0 * sample_rate_hz;
    const double warped = fs2 * std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);

    std::vector<BiquadSection> sections;
    sections.reserve(static_cast<std::size_t>(order) / 2);
    for (int k = 0; k < order / 2; ++k) {
        const double theta = std::numbers::pi * (2.0 * k + order + 1.0) / (2.0 * order);
        const std::complex<double> pole = warped * std::polar(1.0, theta);  // left half plane
        const std::complex<double> zp = (fs2 + pole) / (fs2 - pole);        // bilinear image
        const double a1 = -2.0 * zp.real();
        const double a2 = std::norm(zp);
        const double gain = (1.0 + a1 + a2) / 4.0;  // unit DC gain per section, zeros at z = -1
        sections.push_back({gain, 2.0 * gain, gain, a1, a2});
    }
    return IIRFilter(std::move(sections), order, cutoff_hz, sample_rate_hz);
}

UniformSeries filter_series(const IIRFilter& filter, const UniformSeries& input) {
    if (input.sample_rate_hz() != filter.sample_rate_hz())
        throw_data("series rate does not match the filter design rate");

    std::vector<double> y(input.values());
    for (const BiquadSection& s : filter.sections()) {
        double s1 = 0.0, s2 = 0.0;
        for (double& v : y) {
            const double x = v;
            const double out = s.b0 * x + s1;
            s1 = s.b1 * x - s.a1 * out + s2;
            s2 = s.b2 * x - s.a2 * out;
            v = out;
        }
    }
    return UniformSeries(input.sample_rate_hz(), input.start_time(), std::move(y));
}

UniformSeries decimate(const UniformSeries& input, std::size_t factor) {
    if (factor == 0) throw_data("decimation factor must be >= 1");
    if (factor == 1) return input;
    std::vector<double> kept;
    kept.reserve(input.size() / factor + 1);
    for (std::size_t i = 0; i < input.size(); i += factor) kept.push_back(input[i]);
    return UniformSeries(input.sample_rate_hz() / static_cast<double>(factor), input.start_time(), std::move(kept));
}

}  // namespace csd
