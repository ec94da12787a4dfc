#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "roughflow/errors.hpp"

namespace roughflow {

using Vec = std::vector<double>;

inline Vec operator+(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
inline Vec operator-(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
inline Vec operator*(double s, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}
inline void axpy(double s, const Vec& x, Vec& y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += s * x[i];
}
inline double inf_norm(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}
inline double two_norm(const Vec& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

struct Mat {
    int rows = 0, cols = 0;
    std::vector<double> a; // row major

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
    static Mat from_rows(const std::vector<std::vector<double>>& rows_in) {
        if (rows_in.empty()) throw domain_error("empty matrix");
        Mat m(static_cast<int>(rows_in.size()), static_cast<int>(rows_in.front().size()));
        for (int i = 0; i < m.rows; ++i) {
            if (static_cast<int>(rows_in[static_cast<std::size_t>(i)].size()) != m.cols)
                throw domain_error("ragged matrix rows");
            for (int j = 0; j < m.cols; ++j)
                m(i, j) = rows_in[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        return m;
    }

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

inline Vec matvec(const Mat& m, const Vec& x) {
    Vec r(static_cast<std::size_t>(m.rows), 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r[static_cast<std::size_t>(i)] += m(i, j) * x[static_cast<std::size_t>(j)];
    return r;
}

inline Mat matmul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw domain_error("matmul shape mismatch");
    Mat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const double xik = x(i, k);
            if (xik == 0.0) continue;
            for (int j = 0; j < y.cols; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

inline Mat operator+(const Mat& x, const Mat& y) {
    Mat r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += y.a[i];
    return r;
}
inline Mat operator-(const Mat& x, const Mat& y) {
    Mat r = x;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= y.a[i];
    return r;
}
inline Mat operator*(double s, const Mat& x) {
    Mat r = x;
    for (double& v : r.a) v *= s;
    return r;
}

inline Mat commutator(const Mat& x, const Mat& y) { return matmul(x, y) - matmul(y, x); }

inline double frobenius(const Mat& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

inline double max_abs(const Mat& m) {
    double s = 0.0;
    for (double v : m.a) s = std::max(s, std::fabs(v));
    return s;
}

// Scaling-and-squaring Taylor evaluation; plenty for the small dense
// generators used as oracles here.
inline Mat mat_exp(const Mat& m) {
    if (m.rows != m.cols) throw domain_error("mat_exp needs a square matrix");
    int squarings = 0;
    double scale = frobenius(m);
    while (scale > 0.25) {
        scale /= 2.0;
        ++squarings;
    }
    Mat x = std::pow(0.5, squarings) * m;
    Mat term = Mat::identity(m.rows);
    Mat sum = term;
    for (int k = 1; k <= 20; ++k) {
        term = (1.0 / k) * matmul(term, x);
        sum = sum + term;
        if (max_abs(term) < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) sum = matmul(sum, sum);
    return sum;
}

} // namespace roughflow
