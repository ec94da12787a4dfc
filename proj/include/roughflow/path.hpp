#pragma once

#include <string>
#include <vector>

#include "roughflow/coeff.hpp"
#include "roughflow/errors.hpp"

namespace roughflow {

// Piecewise-linear driver with knots at strictly increasing times. With
// rational scalars every signature computation below is exact.
template <typename S>
class PiecewiseLinearPath {
  public:
    PiecewiseLinearPath(std::vector<S> times, std::vector<std::vector<S>> values)
        : times_(std::move(times)), values_(std::move(values)) {
        if (times_.size() < 2) throw domain_error("a path needs at least two knots");
        if (values_.size() != times_.size())
            throw domain_error("knot time/value count mismatch");
        for (std::size_t i = 1; i < times_.size(); ++i)
            if (!(times_[i - 1] < times_[i]))
                throw domain_error("knot times must be strictly increasing");
        for (const auto& v : values_)
            if (v.size() != values_.front().size())
                throw domain_error("inconsistent path dimension");
    }

    int dimension() const { return static_cast<int>(values_.front().size()); }
    const std::vector<S>& times() const { return times_; }
    const std::vector<std::vector<S>>& values() const { return values_; }
    S start_time() const { return times_.front(); }
    S end_time() const { return times_.back(); }

    std::vector<S> value_at(const S& t) const {
        if (t <= times_.front()) return values_.front();
        if (t >= times_.back()) return values_.back();
        std::size_t k = 1;
        while (times_[k] < t) ++k;
        const S& t0 = times_[k - 1];
        const S& t1 = times_[k];
        S w = (t - t0) / (t1 - t0);
        std::vector<S> out(values_.front().size());
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] = values_[k - 1][i] + w * (values_[k][i] - values_[k - 1][i]);
        return out;
    }

    // Breakpoints of [s, t] at interior knot times, as (left, right) pairs
    // covering the interval.
    std::vector<std::pair<S, S>> pieces(const S& s, const S& t) const {
        std::vector<std::pair<S, S>> out;
        S cur = s;
        for (std::size_t k = 0; k < times_.size(); ++k) {
            if (times_[k] <= cur) continue;
            if (times_[k] >= t) break;
            out.emplace_back(cur, times_[k]);
            cur = times_[k];
        }
        if (cur < t) out.emplace_back(cur, t);
        return out;
    }

  private:
    std::vector<S> times_;
    std::vector<std::vector<S>> values_;
};

// CSV rows: time, x_1, ..., x_d (header line optional).
std::vector<std::vector<std::string>> read_csv_rows(const std::string& file);
std::vector<std::vector<std::string>> parse_csv_rows(const std::string& text);

namespace detail {
template <typename S>
PiecewiseLinearPath<S> path_from_rows(const std::vector<std::vector<std::string>>& rows) {
    std::vector<S> times;
    std::vector<std::vector<S>> values;
    for (const auto& row : rows) {
        if (row.empty()) continue;
        std::vector<S> cells;
        try {
            for (const auto& cell : row) cells.push_back(coeff_from_string<S>(cell));
        } catch (const parse_error&) {
            if (times.empty()) continue; // header
            throw;
        }
        if (cells.size() < 2) throw parse_error("path rows need time plus one coordinate");
        times.push_back(cells.front());
        values.emplace_back(cells.begin() + 1, cells.end());
    }
    return PiecewiseLinearPath<S>(std::move(times), std::move(values));
}
} // namespace detail

template <typename S>
PiecewiseLinearPath<S> path_from_csv_text(const std::string& text) {
    return detail::path_from_rows<S>(parse_csv_rows(text));
}

template <typename S>
PiecewiseLinearPath<S> load_path_csv(const std::string& file) {
    return detail::path_from_rows<S>(read_csv_rows(file));
}

} // namespace roughflow
