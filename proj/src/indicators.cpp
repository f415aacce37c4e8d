#include "csd/indicators.hpp"

#include <algorithm>
#include <cmath>

#include "csd/error.hpp"
#include "csd/preprocess.hpp"

namespace csd {

IndicatorSeries::IndicatorSeries(double sample_rate_hz, double start_time, std::size_t length,
                                 std::size_t first_valid_index)
    : sample_rate_hz_(sample_rate_hz),
      start_time_(start_time),
      first_valid_index_(first_valid_index),
      values_(length, undefined_marker) {}

bool IndicatorSeries::defined(std::size_t i) const {
    return i >= first_valid_index_ && i < values_.size() && !std::isnan(values_[i]);
}

std::size_t IndicatorSeries::defined_count() const {
    std::size_t n = 0;
    for (std::size_t i = first_valid_index_; i < values_.size(); ++i)
        if (!std::isnan(values_[i])) ++n;
    return n;
}

std::vector<double> IndicatorSeries::defined_values() const {
    std::vector<double> out;
    out.reserve(values_.size());
    for (std::size_t i = first_valid_index_; i < values_.size(); ++i)
        if (!std::isnan(values_[i])) out.push_back(values_[i]);
    return out;
}

IndicatorSeries IndicatorSeries::shifted_onto(double start_time, std::size_t offset, std::size_t total_length) const {
    IndicatorSeries out(sample_rate_hz_, start_time, total_length, first_valid_index_ + offset);
    for (std::size_t i = 0; i < values_.size() && i + offset < total_length; ++i)
        out.values_[i + offset] = values_[i];
    return out;
}

std::size_t detrend_offset(const DetrendConfig& cfg) {
    return cfg.mode == DetrendMode::trailing ? cfg.window - 1 : (cfg.window - 1) / 2;
}

UniformSeries detrend_moving_average(const UniformSeries& input, const DetrendConfig& cfg) {
    const std::size_t w = cfg.window;
    if (cfg.mode == DetrendMode::trailing) {
        if (w < 2) throw_data("trailing detrend window must be >= 2");
    } else {
        if (w < 3 || w % 2 == 0) throw_data("centered detrend window must be odd and >= 3");
    }
    if (input.size() <= w) throw_data("series shorter than the detrend window");

    // Prefix sums in extended precision keep the subtraction exact enough
    // for the 1e-9 shift-invariance contract on long offset-heavy records.
    std::vector<long double> prefix(input.size() + 1, 0.0L);
    for (std::size_t i = 0; i < input.size(); ++i) prefix[i + 1] = prefix[i] + input[i];

    const std::size_t n_out = input.size() - w + 1;
    std::vector<double> residual(n_out);
    const std::size_t lead = detrend_offset(cfg);
    for (std::size_t j = 0; j < n_out; ++j) {
        const std::size_t lo = cfg.mode == DetrendMode::trailing ? j : j;  // window start in source
        const long double mean = (prefix[lo + w] - prefix[lo]) / static_cast<long double>(w);
        residual[j] = static_cast<double>(static_cast<long double>(input[j + lead]) - mean);
    }
    return UniformSeries(input.sample_rate_hz(), input.time_at(lead), std::move(residual));
}

// ---------------------------------------------------------------------------
// rolling engines

RollingAc1::RollingAc1(std::size_t window) : window_(window), ring_(window, 0.0) {
    if (window < 3) throw_data("AC1 window must be >= 3 (needs >= 2 lagged pairs)");
}

void RollingAc1::reset() {
    head_ = count_ = since_refresh_ = 0;
    anchor_ = sa_ = sb_ = saa_ = sbb_ = sab_ = 0.0;
}

void RollingAc1::reaccumulate() {
    // anchor on the window mean: Pearson is shift invariant, and a mean
    // anchor removes the offset^2 cancellation in the raw moments
    long double sum = 0.0L;
    for (std::size_t i = 0; i < window_; ++i) sum += ring_[(head_ + i) % window_];
    anchor_ = static_cast<double>(sum / static_cast<long double>(window_));
    sa_ = sb_ = saa_ = sbb_ = sab_ = 0.0;
    double prev = ring_[head_ % window_] - anchor_;
    for (std::size_t i = 1; i < window_; ++i) {
        const double cur = ring_[(head_ + i) % window_] - anchor_;
        sa_ += prev;
        sb_ += cur;
        saa_ += prev * prev;
        sbb_ += cur * cur;
        sab_ += prev * cur;
        prev = cur;
    }
    since_refresh_ = 0;
}

std::optional<double> RollingAc1::push(double x) {
    if (count_ < window_) {
        ring_[(head_ + count_) % window_] = x;
        ++count_;
        if (count_ < window_) return std::nullopt;
        reaccumulate();
    } else {
        const double evicted = ring_[head_] - anchor_;
        const double old_second = ring_[(head_ + 1) % window_] - anchor_;
        const double prev_newest = ring_[(head_ + window_ - 1) % window_] - anchor_;
        const double incoming = x - anchor_;
        ring_[head_] = x;
        head_ = (head_ + 1) % window_;
        sa_ += prev_newest - evicted;
        sb_ += incoming - old_second;
        saa_ += prev_newest * prev_newest - evicted * evicted;
        sbb_ += incoming * incoming - old_second * old_second;
        sab_ += prev_newest * incoming - evicted * old_second;
        if (++since_refresh_ >= window_) reaccumulate();
    }

    const double n = static_cast<double>(window_ - 1);
    const double cov = sab_ - sa_ * sb_ / n;
    const double va = saa_ - sa_ * sa_ / n;
    const double vb = sbb_ - sb_ * sb_ / n;
    if (!(va > 0.0) || !(vb > 0.0)) return std::nullopt;
    const double r = cov / std::sqrt(va * vb);
    if (!std::isfinite(r)) return std::nullopt;
    return std::clamp(r, -1.0, 1.0);
}

RollingVariance::RollingVariance(std::size_t window) : window_(window), ring_(window, 0.0) {
    if (window < 2) throw_data("variance window must be >= 2");
}

void RollingVariance::reset() {
    head_ = count_ = since_refresh_ = 0;
    anchor_ = s_ = ss_ = 0.0;
}

void RollingVariance::reaccumulate() {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < window_; ++i) sum += ring_[i];
    anchor_ = static_cast<double>(sum / static_cast<long double>(window_));
    s_ = ss_ = 0.0;
    for (std::size_t i = 0; i < window_; ++i) {
        const double d = ring_[i] - anchor_;
        s_ += d;
        ss_ += d * d;
    }
    since_refresh_ = 0;
}

std::optional<double> RollingVariance::push(double x) {
    if (count_ < window_) {
        ring_[(head_ + count_) % window_] = x;
        ++count_;
        if (count_ < window_) return std::nullopt;
        reaccumulate();
    } else {
        const double evicted = ring_[head_] - anchor_;
        const double incoming = x - anchor_;
        ring_[head_] = x;
        head_ = (head_ + 1) % window_;
        s_ += incoming - evicted;
        ss_ += incoming * incoming - evicted * evicted;
        if (++since_refresh_ >= window_) reaccumulate();
    }

    // exact zero for an exactly-constant window
    bool constant = true;
    for (std::size_t i = 1; i < window_ && constant; ++i) constant = ring_[i] == ring_[0];
    if (constant) return 0.0;

    const double n = static_cast<double>(window_);
    const double var = (ss_ - s_ * s_ / n) / (n - 1.0);
    if (!std::isfinite(var)) return std::nullopt;
    return std::max(var, 0.0);
}

// ---------------------------------------------------------------------------

namespace {

template <typename Engine>
IndicatorSeries slide(const UniformSeries& residual, const Ac1Config& cfg) {
    if (cfg.window < 3) throw_data("AC1 window must be >= 3");
    if (cfg.stride == 0) throw_data("stride must be >= 1");
    if (residual.size() < cfg.window) throw_data("series shorter than the indicator window");

    IndicatorSeries out(residual.sample_rate_hz(), residual.start_time(), residual.size(), cfg.window - 1);
    Engine engine(cfg.window);
    for (std::size_t i = 0; i < residual.size(); ++i) {
        const auto v = engine.push(residual[i]);
        if (i < cfg.window - 1) continue;
        if ((i - (cfg.window - 1)) % cfg.stride != 0) continue;
        if (v) out.set(i, *v);
    }
    return out;
}

}  // namespace

IndicatorSeries sliding_ac1(const UniformSeries& residual, const Ac1Config& cfg) {
    return slide<RollingAc1>(residual, cfg);
}

IndicatorSeries sliding_variance(const UniformSeries& residual, const Ac1Config& cfg) {
    return slide<RollingVariance>(residual, cfg);
}

double median_indicator(const IndicatorSeries& series) {
    std::vector<double> vals = series.defined_values();
    if (vals.empty()) throw_numeric("no defined indicator values to take a median of");
    const std::size_t n = vals.size();
    std::nth_element(vals.begin(), vals.begin() + n / 2, vals.end());
    const double upper = vals[n / 2];
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(vals.begin(), vals.begin() + n / 2);
    return 0.5 * (lower + upper);
}

PipelineResult run_pipeline(const MultiChannelRecord& record, const PreprocessConfig& pre,
                            const DetrendConfig& detrend, const Ac1Config& ac1) {
    if (record.empty()) throw_data("record has no channels");
    if (pre.lowpass_order.has_value() != pre.lowpass_cutoff_hz.has_value())
        throw_usage("lowpass order and cutoff must be given together");

    std::optional<IIRFilter> filter;
    if (pre.lowpass_order)
        filter = design_butterworth_lowpass(*pre.lowpass_order, *pre.lowpass_cutoff_hz, record.sample_rate_hz());

    PipelineResult result;
    for (const std::string& name : record.channel_names()) {
        UniformSeries stage = record.channel(name);
        if (filter) stage = filter_series(*filter, stage);
        if (pre.decimate_factor > 1) stage = decimate(stage, pre.decimate_factor);

        const UniformSeries residual = detrend_moving_average(stage, detrend);
        const std::size_t offset = detrend_offset(detrend);

        ChannelIndicators ch{
            sliding_ac1(residual, ac1).shifted_onto(stage.start_time(), offset, stage.size()),
            sliding_variance(residual, ac1).shifted_onto(stage.start_time(), offset, stage.size()),
            std::nullopt,
            std::nullopt,
        };
        if (ch.ac1.defined_count() > 0) ch.median_ac1 = median_indicator(ch.ac1);
        if (ch.variance.defined_count() > 0) ch.median_variance = median_indicator(ch.variance);
        result.sample_rate_hz = stage.sample_rate_hz();
        result.channels.emplace_back(name, std::move(ch));
    }
    return result;
}

std::size_t choose_ac1_window(const UniformSeries& residual, double target_median, std::size_t lo, std::size_t hi) {
    lo = std::max<std::size_t>(lo, 3);
    hi = std::min(hi, residual.size());
    if (hi < lo) throw_data("window search range is empty for this series");

    const auto median_at = [&](std::size_t w) { return median_indicator(sliding_ac1(residual, {w, 1})); };
    while (hi - lo > 1) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (median_at(mid) < target_median)
            lo = mid;
        else
            hi = mid;
    }
    if (hi == lo) return lo;
    return std::abs(median_at(lo) - target_median) <= std::abs(median_at(hi) - target_median) ? lo : hi;
}

}  // namespace csd
