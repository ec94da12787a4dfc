#pragma once

#include <cstddef>
#include <vector>

#include "roughflow/errors.hpp"

namespace roughflow {

// Truncated polynomial in K pairwise-commuting nilpotent generators
// (t_i^2 = 0), indexed by subset masks. Evaluating a smooth expression at
// a + sum_i t_i v_i and reading the full-mask coefficient yields the exact
// mixed derivative D^K f(a)·(v_1,...,v_K): forward-mode differentiation
// without truncation error for rational operations.
class NilpotentJet {
  public:
    NilpotentJet() = default;
    NilpotentJet(int k, double value) : k_(k), c_(std::size_t(1) << k, 0.0) { c_[0] = value; }

    static NilpotentJet variable(int k, double value, int slot, double direction) {
        NilpotentJet j(k, value);
        j.c_[std::size_t(1) << slot] = direction;
        return j;
    }

    int generators() const { return k_; }
    double value() const { return c_.empty() ? 0.0 : c_[0]; }
    double full_coefficient() const { return c_.empty() ? 0.0 : c_.back(); }
    double coefficient(std::size_t mask) const { return c_[mask]; }

    NilpotentJet& operator+=(const NilpotentJet& o) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
        return *this;
    }
    NilpotentJet& operator-=(const NilpotentJet& o) {
        for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
        return *this;
    }
    friend NilpotentJet operator+(NilpotentJet a, const NilpotentJet& b) { return a += b; }
    friend NilpotentJet operator-(NilpotentJet a, const NilpotentJet& b) { return a -= b; }

    friend NilpotentJet operator*(const NilpotentJet& a, const NilpotentJet& b) {
        if (a.k_ != b.k_) throw domain_error("jet generator count mismatch");
        NilpotentJet r(a.k_, 0.0);
        const std::size_t full = a.c_.size();
        for (std::size_t x = 0; x < full; ++x) {
            if (a.c_[x] == 0.0) continue;
            for (std::size_t y = 0; y < full; ++y) {
                if ((x & y) != 0 || b.c_[y] == 0.0) continue; // t_i^2 = 0
                r.c_[x | y] += a.c_[x] * b.c_[y];
            }
        }
        return r;
    }
    friend NilpotentJet operator*(double s, NilpotentJet a) {
        for (double& v : a.c_) v *= s;
        return a;
    }
    friend NilpotentJet operator+(NilpotentJet a, double s) {
        a.c_[0] += s;
        return a;
    }

  private:
    int k_ = 0;
    std::vector<double> c_;
};

} // namespace roughflow
