#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "csd/series.hpp"

namespace csd {

// One second-order section, direct form II transposed:
//   y[n] = b0 x[n] + s1;  s1 = b1 x[n] - a1 y[n] + s2;  s2 = b2 x[n] - a2 y[n]
struct BiquadSection {
    double b0, b1, b2;
    double a1, a2;
};

class IIRFilter {
  public:
    IIRFilter(std::vector<BiquadSection> sections, int order, double cutoff_hz, double sample_rate_hz);

    const std::vector<BiquadSection>& sections() const noexcept { return sections_; }
    int order() const noexcept { return order_; }
    double cutoff_hz() const noexcept { return cutoff_hz_; }
    double sample_rate_hz() const noexcept { return sample_rate_hz_; }

    // Cascade response at z = exp(j 2 pi f / fs).
    std::complex<double> frequency_response(double freq_hz) const;

  private:
    std::vector<BiquadSection> sections_;
    int order_;
    double cutoff_hz_;
    double sample_rate_hz_;
};

// Digital Butterworth low-pass as a cascade of order/2 biquads, designed by
// bilinear transform with cutoff prewarping. Each section is normalized to
// unit DC gain; construction verifies pole radii < 1 - 1e-9 and cascade DC
// gain within 1e-6 of one. Odd orders are rejected.
IIRFilter design_butterworth_lowpass(int order, double cutoff_hz, double sample_rate_hz);

// Causal single pass with zero initial section states. Warm-up transients
// are the caller's concern. The input rate must equal the design rate.
UniformSeries filter_series(const IIRFilter& filter, const UniformSeries& input);

// Keeps samples 0, factor, 2*factor, ... and divides the rate. Does not
// anti-alias filter; pair with filter_series.
UniformSeries decimate(const UniformSeries& input, std::size_t factor);

}  // namespace csd
