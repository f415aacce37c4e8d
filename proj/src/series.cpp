#include "csd/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "csd/error.hpp"

namespace csd {

UniformSeries::UniformSeries(double sample_rate_hz, double start_time, std::vector<double> values)
    : sample_rate_hz_(sample_rate_hz), start_time_(start_time), values_(std::move(values)) {
    if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_))
        throw_data("sample_rate_hz must be positive and finite");
    if (!std::isfinite(start_time_)) throw_data("start_time must be finite");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i]))
            throw_data("non-finite sample at index " + std::to_string(i));
    }
}

void MultiChannelRecord::add_channel(const std::string& name, UniformSeries series) {
    if (channels_.count(name)) throw_data("duplicate channel '" + name + "'");
    if (!order_.empty()) {
        const UniformSeries& first = channels_.at(order_.front());
        if (series.sample_rate_hz() != first.sample_rate_hz())
            throw_data("channel '" + name + "' sample rate differs from '" + order_.front() + "'");
        if (series.size() != first.size())
            throw_data("channel '" + name + "' length differs from '" + order_.front() + "'");
    }
    order_.push_back(name);
    channels_.emplace(name, std::move(series));
}

const UniformSeries& MultiChannelRecord::channel(const std::string& name) const {
    auto it = channels_.find(name);
    if (it == channels_.end()) throw_data("no channel '" + name + "'");
    return it->second;
}

bool MultiChannelRecord::has_channel(const std::string& name) const { return channels_.count(name) != 0; }

std::size_t MultiChannelRecord::length() const {
    return order_.empty() ? 0 : channels_.at(order_.front()).size();
}

double MultiChannelRecord::sample_rate_hz() const {
    if (order_.empty()) throw_data("record has no channels");
    return channels_.at(order_.front()).sample_rate_hz();
}

DensityHistogram histogram(std::span<const double> values, double bin_width, double lo, double hi) {
    if (!(bin_width > 0.0)) throw_data("bin_width must be positive");
    if (!(hi > lo)) throw_data("histogram domain is empty");

    const std::size_t bins = static_cast<std::size_t>(std::ceil((hi - lo) / bin_width - 1e-12));
    DensityHistogram out;
    out.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i < bins; ++i) out.bin_edges[i] = lo + static_cast<double>(i) * bin_width;
    out.bin_edges[bins] = hi;  // last bin truncated when bin_width does not divide the span

    std::vector<std::size_t> counts(bins, 0);
    std::size_t inside = 0;
    for (double v : values) {
        if (!(v >= lo) || !(v <= hi)) {
            ++out.dropped;
            continue;
        }
        std::size_t idx = (v >= hi) ? bins - 1
                                    : static_cast<std::size_t>((v - lo) / bin_width);
        if (idx >= bins) idx = bins - 1;
        ++counts[idx];
        ++inside;
    }
    if (inside == 0) throw_data("no values inside histogram domain");

    out.densities.resize(bins);
    for (std::size_t i = 0; i < bins; ++i) {
        const double width = out.bin_edges[i + 1] - out.bin_edges[i];
        out.densities[i] = static_cast<double>(counts[i]) / (static_cast<double>(inside) * width);
    }
    return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            std::string field = line.substr(start, i - start);
            // tolerate trailing CR from CRLF files
            while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
            while (!field.empty() && field.front() == ' ') field.erase(field.begin());
            out.push_back(std::move(field));
            start = i + 1;
        }
    }
    return out;
}

double parse_number(const std::string& field, std::size_t row, const std::string& column) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || end != begin + field.size())
        throw_data("non-numeric cell in column '" + column + "' at data row " + std::to_string(row));
    return v;
}

}  // namespace

MultiChannelRecord load_csv(std::istream& in, const std::vector<std::string>& schema) {
    std::string line;
    if (!std::getline(in, line)) throw_data("empty input: missing header row");
    const std::vector<std::string> header = split_line(line);

    std::size_t t_col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == "t") t_col = i;
    if (t_col == header.size()) throw_data("missing required time column 't'");

    std::vector<std::string> wanted = schema;
    if (wanted.empty()) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (i != t_col) wanted.push_back(header[i]);
    }
    std::vector<std::size_t> col_of;
    for (const std::string& name : wanted) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw_data("schema column '" + name + "' not found in header");
        col_of.push_back(static_cast<std::size_t>(it - header.begin()));
    }

    std::vector<double> times;
    std::vector<std::vector<double>> columns(wanted.size());
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        ++row;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size())
            throw_data("row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                       " fields, header has " + std::to_string(header.size()));
        times.push_back(parse_number(fields[t_col], row, "t"));
        for (std::size_t c = 0; c < col_of.size(); ++c)
            columns[c].push_back(parse_number(fields[col_of[c]], row, wanted[c]));
    }

    if (times.size() < 2) throw_data("need >= 2 samples to infer the sample rate");

    std::vector<double> gaps(times.size() - 1);
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        gaps[i] = times[i + 1] - times[i];
        if (!(gaps[i] > 0.0)) throw_data("time column not strictly increasing at data row " + std::to_string(i + 2));
    }
    std::vector<double> sorted = gaps;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median_gap = sorted[sorted.size() / 2];
    for (std::size_t i = 0; i < gaps.size(); ++i) {
        if (std::abs(gaps[i] - median_gap) > 0.01 * median_gap)
            throw_data("non-uniform sampling: gap at data row " + std::to_string(i + 2) + " deviates " +
                       std::to_string(std::abs(gaps[i] - median_gap) / median_gap * 100.0) + "% from the median");
    }

    MultiChannelRecord record;
    const double rate = 1.0 / median_gap;
    for (std::size_t c = 0; c < wanted.size(); ++c)
        record.add_channel(wanted[c], UniformSeries(rate, times.front(), std::move(columns[c])));
    return record;
}

MultiChannelRecord load_csv_file(const std::string& path, const std::vector<std::string>& schema) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open '" + path + "'");
    return load_csv(in, schema);
}

std::string format_cell(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void write_csv(const MultiChannelRecord& record, std::ostream& out) {
    if (record.empty()) throw_data("cannot write a record with no channels");
    out << "t";
    for (const std::string& name : record.channel_names()) out << ',' << name;
    out << '\n';
    const UniformSeries& first = record.channel(record.channel_names().front());
    for (std::size_t i = 0; i < record.length(); ++i) {
        out << format_cell(first.time_at(i));
        for (const std::string& name : record.channel_names()) out << ',' << format_cell(record.channel(name)[i]);
        out << '\n';
    }
}

void write_csv_file(const MultiChannelRecord& record, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw_data("cannot open '" + path + "' for writing");
    write_csv(record, out);
}

}  // namespace csd
