#pragma once

#include <algorithm>
#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mflica {

// One individual's m-dimensional series. Values are stored row-major,
// one m-vector per time step; time steps are 1-based everywhere.
struct TimeSeries {
    std::string id;
    std::size_t dim = 0;
    std::vector<double> values;

    std::size_t length() const {
        return dim == 0 ? 0 : values.size() / dim;
    }

    // Point at step t (1-based).
    std::span<const double> at(std::size_t t) const {
        return {values.data() + (t - 1) * dim, dim};
    }
};

// A fixed-length collection of series sharing one clock.
struct Dataset {
    std::vector<TimeSeries> series;

    std::size_t size() const { return series.size(); }
    std::size_t length() const { return series.empty() ? 0 : series.front().length(); }
    std::size_t dim() const { return series.empty() ? 0 : series.front().dim; }

    const TimeSeries& operator[](std::size_t i) const { return series[i]; }

    int index_of(const std::string& id) const {
        for (std::size_t i = 0; i < series.size(); ++i)
            if (series[i].id == id) return static_cast<int>(i);
        return -1;
    }

    // Checks the shared-length/shared-dimension/unique-id invariants.
    void validate() const {
        if (series.empty()) throw std::invalid_argument("dataset: no series");
        const std::size_t t_star = series.front().length();
        const std::size_t m = series.front().dim;
        if (t_star < 1) throw std::invalid_argument("dataset: empty series");
        if (m < 1) throw std::invalid_argument("dataset: zero-dimensional series");
        for (const auto& s : series) {
            if (s.length() != t_star)
                throw std::invalid_argument("dataset: series '" + s.id + "' has mismatched length");
            if (s.dim != m)
                throw std::invalid_argument("dataset: series '" + s.id + "' has mismatched dimension");
        }
        for (std::size_t i = 0; i < series.size(); ++i)
            for (std::size_t j = i + 1; j < series.size(); ++j)
                if (series[i].id == series[j].id)
                    throw std::invalid_argument("dataset: duplicate id '" + series[i].id + "'");
    }
};

// Sliding window w(i): start = (i-1)*delta, end = start+omega, as half-open
// offsets into the series. Window [start, end) covers steps start+1 .. end.
struct Window {
    std::size_t index = 1;
    std::size_t start = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - start; }
};

// Rounds 0.1*omega to the nearest integer, ties up, floored at 1.
inline std::size_t default_shift(std::size_t omega) {
    const std::size_t d = static_cast<std::size_t>(0.1 * static_cast<double>(omega) + 0.5);
    return d < 1 ? 1 : d;
}

// K = floor((t*-omega)/delta) regular windows plus one tail window
// covering [K*delta, t*).
inline std::vector<Window> sliding_windows(std::size_t t_star, std::size_t omega, std::size_t delta) {
    if (omega < 1 || omega > t_star)
        throw std::invalid_argument("sliding_windows: omega must be in [1, t*]");
    if (delta < 1 || delta > omega)
        throw std::invalid_argument("sliding_windows: delta must be in [1, omega]");
    const std::size_t k = (t_star - omega) / delta;
    std::vector<Window> windows;
    windows.reserve(k + 1);
    for (std::size_t i = 1; i <= k; ++i)
        windows.push_back({i, (i - 1) * delta, (i - 1) * delta + omega});
    windows.push_back({k + 1, k * delta, t_star});
    return windows;
}

// Restriction of every series to [window.start, window.end); order preserved.
inline Dataset slice(const Dataset& dataset, const Window& window) {
    const std::size_t t_star = dataset.length();
    if (window.start >= window.end || window.end > t_star)
        throw std::invalid_argument("slice: window out of range");
    Dataset out;
    out.series.reserve(dataset.size());
    for (const auto& s : dataset.series) {
        TimeSeries sub;
        sub.id = s.id;
        sub.dim = s.dim;
        sub.values.assign(s.values.begin() + static_cast<std::ptrdiff_t>(window.start * s.dim),
                          s.values.begin() + static_cast<std::ptrdiff_t>(window.end * s.dim));
        out.series.push_back(std::move(sub));
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

inline bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    while (begin < end && (*begin == ' ' || *begin == '\t')) ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    while (ptr < end && (*ptr == ' ' || *ptr == '\t' || *ptr == '\r')) ++ptr;
    return ec == std::errc() && ptr == end;
}

// ids sort numerically when every id parses as an integer, else lexically.
inline void sort_ids(std::vector<std::string>& ids) {
    bool all_numeric = true;
    for (const auto& id : ids) {
        long long v = 0;
        auto [ptr, ec] = std::from_chars(id.data(), id.data() + id.size(), v);
        if (ec != std::errc() || ptr != id.data() + id.size()) {
            all_numeric = false;
            break;
        }
    }
    if (all_numeric) {
        std::sort(ids.begin(), ids.end(), [](const std::string& a, const std::string& b) {
            return std::stoll(a) < std::stoll(b);
        });
    } else {
        std::sort(ids.begin(), ids.end());
    }
}

}  // namespace detail

// Reads a trajectory CSV with header `id,t,x0[,x1,...]`. Timestamps may be
// arbitrary monotone numbers; they are remapped to steps 1..t* on load.
// Every id must have a row for every timestamp present in the file.
inline Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_dataset: cannot open " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("load_dataset: empty file " + path.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = detail::split_csv_line(line);
    if (header.size() < 3 || header[0] != "id" || header[1] != "t")
        throw std::runtime_error("load_dataset: header must be id,t,x0[,x1,...]");
    const std::size_t m = header.size() - 2;

    std::map<std::string, std::map<double, std::vector<double>>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 2 + m)
            throw std::runtime_error("load_dataset: line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(2 + m) + " fields, got " +
                                     std::to_string(fields.size()));
        double t = 0;
        if (!detail::parse_double(fields[1], t))
            throw std::runtime_error("load_dataset: line " + std::to_string(line_no) + ": bad timestamp");
        std::vector<double> point(m);
        for (std::size_t d = 0; d < m; ++d)
            if (!detail::parse_double(fields[2 + d], point[d]))
                throw std::runtime_error("load_dataset: line " + std::to_string(line_no) + ": bad value");
        auto& per_id = rows[fields[0]];
        if (!per_id.emplace(t, std::move(point)).second)
            throw std::runtime_error("load_dataset: duplicate row at (" + fields[0] + "," + fields[1] + ")");
    }
    if (rows.empty()) throw std::runtime_error("load_dataset: no data rows in " + path.string());

    // The union of timestamps defines the clock; any id missing one is a gap.
    std::map<double, std::size_t> clock;
    for (const auto& [id, per_id] : rows)
        for (const auto& [t, point] : per_id) clock.emplace(t, 0);
    std::size_t step = 0;
    for (auto& [t, idx] : clock) idx = ++step;

    std::vector<std::string> ids;
    ids.reserve(rows.size());
    for (const auto& [id, per_id] : rows) ids.push_back(id);
    detail::sort_ids(ids);

    Dataset out;
    out.series.reserve(ids.size());
    for (const auto& id : ids) {
        const auto& per_id = rows[id];
        for (const auto& [t, idx] : clock) {
            if (!per_id.count(t)) {
                std::ostringstream msg;
                msg << "load_dataset: gap at (" << id << "," << t << ")";
                throw std::runtime_error(msg.str());
            }
        }
        TimeSeries s;
        s.id = id;
        s.dim = m;
        s.values.reserve(clock.size() * m);
        for (const auto& [t, idx] : clock) {
            const auto& point = per_id.at(t);
            s.values.insert(s.values.end(), point.begin(), point.end());
        }
        out.series.push_back(std::move(s));
    }
    out.validate();
    return out;
}

inline void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
    dataset.validate();
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_dataset: cannot write " + path.string());
    out << "id,t";
    for (std::size_t d = 0; d < dataset.dim(); ++d) out << ",x" << d;
    out << "\n";
    char buf[40];
    for (const auto& s : dataset.series) {
        for (std::size_t t = 1; t <= s.length(); ++t) {
            out << s.id << ',' << t;
            for (double v : s.at(t)) {
                std::snprintf(buf, sizeof(buf), "%.17g", v);
                out << ',' << buf;
            }
            out << "\n";
        }
    }
}

}  // namespace mflica
