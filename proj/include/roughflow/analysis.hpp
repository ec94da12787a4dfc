#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "roughflow/control.hpp"
#include "roughflow/fields.hpp"
#include "roughflow/linalg.hpp"

namespace roughflow {

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys);

struct OrderFit {
    double order = 0.0;
    bool at_noise_floor = false; // every sample sat below the floor
    std::vector<std::pair<double, double>> used; // (mesh, error) pairs kept
};

// Least-squares slope of log error vs log mesh, discarding samples below
// the noise floor (default 1e3 x machine epsilon).
OrderFit fit_convergence_order(const std::vector<std::pair<double, double>>& mesh_error,
                               double noise_floor = 1e3 * 2.220446049250313e-16);

struct DavieVerdict {
    bool pass = false;
    double worst_ratio = 0.0;    // max U_{r,t} / varpi(omega_{r,t})
    double bound = 0.0;          // M / (1 - kappa)
    double worst_kappa = 0.0;    // max 2 varpi(x) / varpi(2x) over samples
    double worst_hypothesis_gap = 0.0; // max U_{r,t} - U_{r,s} - U_{s,t} - M varpi
    std::array<double, 3> offending_triple{0, 0, 0};
    std::string message;
};

// Checks varpi(0) = 0, the doubling bound 2 varpi(x) <= kappa varpi(2x),
// and the triple hypothesis U_{r,t} <= U_{r,s} + U_{s,t} + M varpi(omega_{r,t})
// on the samples, then asserts the conclusion with constant M/(1-kappa).
DavieVerdict davie_lemma_bound(const std::function<double(double, double)>& U,
                               const std::function<double(double)>& varpi, double kappa, double M,
                               const ControlFunction& control,
                               const std::vector<std::array<double, 3>>& triples);

// sup_{u in (0,1)} u^a (1-u)^b, closed form at u* = a/(a+b).
double term_sup_closed(double a, double b);
// the same by dense grid plus golden-section refinement (oracle)
double term_sup_grid(double a, double b);

struct DecayConstants {
    double p = 2.0;
    double gamma = 1.0;
    int n = 2;
    std::vector<double> k;  // k_0, k_1, ..., seeds and propagated values
    std::vector<double> nu; // nu_0 .. nu_n (nu_0 unused by the recursion)
    std::vector<double> mu;     // optional level bounds (diagnostics)
    std::vector<double> lambda; // optional log-level bounds (diagnostics)
    double path_norm = 1.0;     // |x| prefactor of the recursion
};

// One propagation step: k_level from k_0..k_{level-1} and nu, with the
// per-term supremum in closed form. Requires level + gamma > p.
double decay_propagate(const DecayConstants& c, int level);

struct FactorialBudgetReport {
    bool ok = false;
    double B = 0.0;
    std::vector<double> k;      // all k_j, j = 0..n
    std::vector<double> budget; // B / (j/p)!
    double worst_relative_excess = 0.0;
};

// Seeds k_j = B/(j/p)! for j <= m and nu_j = K B/(j/p)!, propagates up to
// n and checks that the factorial budget is maintained.
FactorialBudgetReport factorial_decay_check(double p, double gamma, int m, int n, double K,
                                            double path_norm = 1.0);

struct FourPointProfile {
    double g_star = 0.0;                             // Lipschitz-type constant
    std::vector<std::pair<double, double>> envelope; // non-decreasing (r, g_hat(r))

    double envelope_at(double r) const;
};

// Empirical profile of the 4-points control over parallelogram quadruples
// (x+u+v, x+v, x+u, x), which isolate the second-difference envelope, plus
// a sampled Lipschitz constant for g^*.
FourPointProfile four_point_check(const std::function<Vec(const Vec&)>& g, const Box& box,
                                  int samples, std::uint64_t seed);

struct FourPointFlowCheck {
    FourPointProfile g_profile;
    FourPointProfile h_profile; // time-1 flow of g
    double h_star_bound = 0.0;  // exp(g^*)
    double h_lip = 0.0;
    bool star_within(double slack) const {
        return h_profile.g_star <= h_star_bound * (1.0 + slack);
    }
};

FourPointFlowCheck four_point_flow_check(const VectorField& g, const Box& box, int samples,
                                         std::uint64_t seed, int substeps);

} // namespace roughflow
