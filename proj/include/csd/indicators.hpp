#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "csd/series.hpp"

namespace csd {

enum class DetrendMode { trailing, centered };

struct DetrendConfig {
    std::size_t window = 3;
    DetrendMode mode = DetrendMode::trailing;
};

struct Ac1Config {
    std::size_t window = 300;
    std::size_t stride = 1;  // dense by default; >1 computes every stride-th window
};

/// Per-window indicator values aligned to a sampling clock. Undefined
/// positions (warm-up, strided gaps, zero-variance windows) carry an
/// explicit marker; consumers must check defined(i) instead of trusting
/// value(i), and aggregates report how many markers they skipped.
class IndicatorSeries {
  public:
    IndicatorSeries(double sample_rate_hz, double start_time, std::size_t length, std::size_t first_valid_index);

    static constexpr double undefined_marker = std::numeric_limits<double>::quiet_NaN();

    double sample_rate_hz() const noexcept { return sample_rate_hz_; }
    double start_time() const noexcept { return start_time_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::size_t first_valid_index() const noexcept { return first_valid_index_; }
    double time_at(std::size_t i) const { return start_time_ + static_cast<double>(i) / sample_rate_hz_; }

    bool defined(std::size_t i) const;
    double value(std::size_t i) const { return values_[i]; }
    void set(std::size_t i, double v) { values_[i] = v; }

    std::size_t defined_count() const;
    std::vector<double> defined_values() const;

    // Same values re-indexed on a timeline with `offset` extra leading
    // samples (used to align residual-based indicators to their source).
    IndicatorSeries shifted_onto(double start_time, std::size_t offset, std::size_t total_length) const;

  private:
    double sample_rate_hz_;
    double start_time_;
    std::size_t first_valid_index_;
    std::vector<double> values_;
};

// Moving-average detrend. Trailing mode subtracts the mean of the window
// ending at each sample (causal, window >= 2); centered mode subtracts the
// mean of the window centered at each sample (odd window >= 3). Samples
// without a full window are excluded: the residual series is shorter than
// the input and its start_time is shifted so timestamps stay aligned.
UniformSeries detrend_moving_average(const UniformSeries& input, const DetrendConfig& cfg);

// Index of the first residual sample relative to the source series.
std::size_t detrend_offset(const DetrendConfig& cfg);

// Lag-1 autocorrelation over a sliding window: Pearson correlation of
// (x[t..t+W-2], x[t+1..t+W-1]) with each sub-vector centered on its own
// mean, so every defined value lies in [-1, 1]. Windows with a
// zero-variance sub-vector (or non-finite arithmetic) yield the undefined
// marker. Values are aligned to the window's last sample.
IndicatorSeries sliding_ac1(const UniformSeries& residual, const Ac1Config& cfg);

// Unbiased per-window sample variance (divisor W-1), same alignment rules.
IndicatorSeries sliding_variance(const UniformSeries& residual, const Ac1Config& cfg);

// Median over defined values only (mean of the two central order statistics
// for even counts). Errors when nothing is defined.
double median_indicator(const IndicatorSeries& series);

/// Streaming lag-1 autocorrelation: O(window) memory, one-in/one-out
/// updates of anchored running sums, with an exact re-accumulation every
/// `window` samples to keep float drift bounded. push() returns the AC1 of
/// the window ending at the new sample once the window is full, or nullopt
/// (not yet full, or the window is degenerate).
class RollingAc1 {
  public:
    explicit RollingAc1(std::size_t window);

    std::optional<double> push(double x);
    bool ready() const noexcept { return count_ >= window_; }
    void reset();

  private:
    void reaccumulate();

    std::size_t window_;
    std::vector<double> ring_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
    std::size_t since_refresh_ = 0;
    double anchor_ = 0.0;
    // running sums over the W-1 lagged pairs of the current window,
    // with `anchor_` subtracted from every sample
    double sa_ = 0, sb_ = 0, saa_ = 0, sbb_ = 0, sab_ = 0;
};

/// Streaming per-window unbiased variance with the same update scheme.
class RollingVariance {
  public:
    explicit RollingVariance(std::size_t window);

    std::optional<double> push(double x);
    bool ready() const noexcept { return count_ >= window_; }
    void reset();

  private:
    void reaccumulate();

    std::size_t window_;
    std::vector<double> ring_;
    std::size_t head_ = 0;
    std::size_t count_ = 0;
    std::size_t since_refresh_ = 0;
    double anchor_ = 0.0;
    double s_ = 0, ss_ = 0;
};

struct PreprocessConfig {
    // Both lowpass fields must be set together.
    std::optional<int> lowpass_order;
    std::optional<double> lowpass_cutoff_hz;
    std::size_t decimate_factor = 1;
};

struct ChannelIndicators {
    IndicatorSeries ac1;
    IndicatorSeries variance;
    std::optional<double> median_ac1;
    std::optional<double> median_variance;
};

struct PipelineResult {
    std::vector<std::pair<std::string, ChannelIndicators>> channels;
    // Timeline after preprocessing (what the indicator series align to).
    double sample_rate_hz = 0;
};

// Full per-channel pipeline: optional low-pass + decimation, then detrend,
// then AC1 and variance. Channels are processed independently and never
// pooled here. The returned indicator series span the preprocessed channel
// length, with warm-up positions undefined.
PipelineResult run_pipeline(const MultiChannelRecord& record, const PreprocessConfig& pre,
                            const DetrendConfig& detrend, const Ac1Config& ac1);

// Window-size tuning heuristic: bisect the AC1 window within [lo, hi] until
// the median indicator of `residual` is closest to `target_median`. Assumes
// the median is nondecreasing in the window size, which holds when slow
// structure dominates larger windows; on data where it does not, the result
// is still the best candidate visited.
std::size_t choose_ac1_window(const UniformSeries& residual, double target_median, std::size_t lo, std::size_t hi);

}  // namespace csd
