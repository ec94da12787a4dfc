#pragma once

#include <array>
#include <cstdint>
#include <functional>

namespace roughflow {

// Super-additive interval size omega_{s,t}; the canonical instance is t - s.
struct ControlFunction {
    std::function<double(double, double)> eval;

    double operator()(double s, double t) const { return eval(s, t); }

    static ControlFunction time_increment() {
        return ControlFunction{[](double s, double t) { return t - s; }};
    }
};

struct SuperadditivityReport {
    bool ok = true;
    double worst_violation = 0.0; // max of omega_{r,s}+omega_{s,t}-omega_{r,t}
    std::array<double, 3> worst_triple{0, 0, 0};
};

// Samples random triples r <= s <= t in [0, horizon]; super-additivity is
// checked, not proved.
SuperadditivityReport check_superadditive(const ControlFunction& control, double horizon,
                                          int samples, std::uint64_t seed);

} // namespace roughflow
