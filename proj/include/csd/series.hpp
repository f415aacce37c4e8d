#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace csd {

/// A uniformly sampled scalar channel. Immutable after construction;
/// construction rejects non-finite values and non-positive rates.
class UniformSeries {
  public:
    UniformSeries(double sample_rate_hz, double start_time, std::vector<double> values);

    double sample_rate_hz() const noexcept { return sample_rate_hz_; }
    double start_time() const noexcept { return start_time_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const { return values_[i]; }

    // Timestamp of sample i. Computed as start + i/rate (one division,
    // no accumulated addition) so there is no drift over long records.
    double time_at(std::size_t i) const { return start_time_ + static_cast<double>(i) / sample_rate_hz_; }

  private:
    double sample_rate_hz_;
    double start_time_;
    std::vector<double> values_;
};

/// Named channels sharing one clock, plus free-form labels
/// (damage level, location, task, ...).
class MultiChannelRecord {
  public:
    MultiChannelRecord() = default;

    // Rejects channels whose rate or length differ from channels already present.
    void add_channel(const std::string& name, UniformSeries series);

    const UniformSeries& channel(const std::string& name) const;
    bool has_channel(const std::string& name) const;
    const std::vector<std::string>& channel_names() const noexcept { return order_; }
    std::size_t channel_count() const noexcept { return order_.size(); }
    bool empty() const noexcept { return order_.empty(); }

    std::size_t length() const;
    double sample_rate_hz() const;

    std::map<std::string, std::string> metadata;

  private:
    std::vector<std::string> order_;
    std::map<std::string, UniformSeries> channels_;
};

struct DensityHistogram {
    std::vector<double> bin_edges;  // ascending, bins+1 entries
    std::vector<double> densities;  // one per bin, integrates to 1
    std::size_t dropped = 0;        // input values outside [lo, hi]
};

// Density histogram over [lo, hi] with uniform bin_width; the last bin is
// truncated when bin_width does not divide the domain. Values outside the
// domain are dropped (counted in .dropped); an input with no value inside
// the domain is an error, not an all-zero histogram.
DensityHistogram histogram(std::span<const double> values, double bin_width, double lo, double hi);

// CSV ingestion. Header row mandatory; one time column named "t" (seconds)
// with strictly increasing, uniformly spaced values; remaining columns are
// numeric channels. The sample rate is inferred as 1/median gap and spacing
// beyond 1% relative jitter is rejected. `schema` names the channel columns
// to load; empty means every non-"t" column.
MultiChannelRecord load_csv(std::istream& in, const std::vector<std::string>& schema = {});
MultiChannelRecord load_csv_file(const std::string& path, const std::vector<std::string>& schema = {});

void write_csv(const MultiChannelRecord& record, std::ostream& out);
void write_csv_file(const MultiChannelRecord& record, const std::string& path);

// Shared numeric-cell formatting for all CSV writers (round-trip safe).
std::string format_cell(double v);

}  // namespace csd
