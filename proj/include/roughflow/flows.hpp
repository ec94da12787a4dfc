#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "roughflow/elementary.hpp"
#include "roughflow/ode.hpp"
#include "roughflow/rough_path.hpp"

namespace roughflow {

// Two-parameter family of maps phi_{t,s}; a flow when the composition
// defect over triples vanishes.
struct AlmostFlow {
    std::string kind = "custom";
    double theta = 0.0; // advertised defect exponent (n+1)/p when known
    ControlFunction control = ControlFunction::time_increment();
    std::function<Vec(double, double, const Vec&)> eval; // (s, t, a) -> phi_{t,s}(a)

    Vec operator()(double s, double t, const Vec& a) const { return eval(s, t, a); }
};

// phi_{t,s}(a) = y_1 with y' = F[logG x_{s,t}](y); the log must lie in the
// declared first-order class. For word/tensor signatures that is the free
// Lie span, checked via the Dynkin projection residual; the branched
// product is Newtonian with L = W, so tree logs pass unconditionally.
AlmostFlow log_ode_flow(const TensorRoughPath& x, const NewtonianMap<Word>& map, int substeps,
                        double lie_tolerance = 1e-8);
AlmostFlow log_ode_flow(const TreeRoughPath& x, const NewtonianMap<DecoratedTree>& map,
                        int substeps);

// phi_{t,s}(a) = F[x_{s,t}](a), the Davie approximation.
template <typename Key>
AlmostFlow davie_flow(const RoughPath<Key>& x, const NewtonianMap<Key>& map) {
    AlmostFlow phi;
    phi.kind = "davie";
    phi.theta = (static_cast<double>(x.order) + 1.0) / x.p;
    phi.control = x.control;
    phi.eval = [x, map](double s, double t, const Vec& a) {
        if (s == t) return a;
        return map.evaluate(x(s, t), a);
    };
    return phi;
}

struct SchemeRun {
    std::vector<double> times;
    std::vector<Vec> states;
};

// y_{t_{k+1}} = phi_{t_{k+1}, t_k}(y_{t_k}) along an increasing partition.
SchemeRun compose_scheme(const AlmostFlow& phi, const std::vector<double>& partition,
                         const Vec& a0, double blowup_cap = 1e8);

struct DefectRow {
    double r, s, t;
    double omega;
    double defect;
};

struct DefectFit {
    bool exact_flow = false; // all sampled defects below the floor
    double theta_hat = 0.0;
    double log_L_hat = 0.0;
    std::vector<DefectRow> table;
};

// Defect of phi over sampled triples, max over the start points; the
// exponent is fitted on per-scale envelope maxima of log defect vs log
// omega.
DefectFit almost_flow_defect(const AlmostFlow& phi,
                             const std::vector<std::array<double, 3>>& triples,
                             const std::vector<Vec>& points, double noise_floor = 1e-12);

// F[beta](y_t[alpha](a)) = F[expG(t alpha) ▷ beta](a) + remainder.
template <typename Key>
std::pair<Vec, Vec> taylor_remainder(const NewtonianMap<Key>& map,
                                     const GradedElement<Key, double>& alpha,
                                     const GradedElement<Key, double>& beta, const Vec& a,
                                     double t, int substeps) {
    Vec y = rk4_integrate(map.as_rhs(alpha), a, t, substeps);
    auto t_alpha = t * alpha;
    Vec main = map.evaluate(mul_truncated(exp_truncated(t_alpha), beta), a);
    Vec remainder = map.evaluate(beta, y) - main;
    return {main, remainder};
}

// y_1[beta] ∘ y_1[alpha](a) − y_1[alpha ⊛ beta](a).
template <typename Key>
Vec composition_defect(const NewtonianMap<Key>& map, const GradedElement<Key, double>& alpha,
                       const GradedElement<Key, double>& beta, const Vec& a, int substeps) {
    Vec y1 = rk4_integrate(map.as_rhs(alpha), a, 1.0, substeps);
    Vec y2 = rk4_integrate(map.as_rhs(beta), y1, 1.0, substeps);
    Vec z = rk4_integrate(map.as_rhs(bchd(alpha, beta)), a, 1.0, substeps);
    return y2 - z;
}

struct CommutationReport {
    double max_defect = 0.0;    // max over the grid of |Phi_i Phi_j − Phi_j Phi_i|
    double bracket_norm = 0.0;  // |D f_j · f_i − D f_i · f_j| at the start point
    double small_t_ratio = 0.0; // defect / t^2 at the smallest grid time
};

CommutationReport commuting_flows_check(const VectorFieldFamily& family, std::size_t i,
                                        std::size_t j, const Vec& a,
                                        const std::vector<double>& t_grid, int substeps);

struct LambdaBounds {
    std::vector<double> lambda_hat; // per grade
    std::vector<double> big_lambda_hat;
};

// Empirical log-level constants: |log x_{s,t}^{(i)}| <= lambda_i omega^{i/p}
// and sup_theta |expG(theta log x)^{(i)}| <= L_i omega^{i/p}.
template <typename Key>
LambdaBounds hoelder_lambda_bounds(const RoughPath<Key>& x,
                                   const std::vector<std::pair<double, double>>& samples) {
    LambdaBounds out;
    out.lambda_hat.assign(x.order + 1, 0.0);
    out.big_lambda_hat.assign(x.order + 1, 0.0);
    for (const auto& [s, t] : samples) {
        if (t <= s) continue;
        const double w = x.control(s, t);
        if (w <= 0.0) continue;
        auto lambda = log_truncated(x(s, t));
        auto norms = per_grade_norms(lambda);
        for (std::size_t i = 1; i <= x.order && i < norms.size(); ++i)
            out.lambda_hat[i] = std::max(out.lambda_hat[i],
                                         coeff_traits<double>::to_double(norms[i]) /
                                             std::pow(w, static_cast<double>(i) / x.p));
        for (double theta : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            auto scaled = exp_truncated(theta * lambda);
            auto en = per_grade_norms(scaled);
            for (std::size_t i = 1; i <= x.order && i < en.size(); ++i)
                out.big_lambda_hat[i] = std::max(out.big_lambda_hat[i],
                                                 coeff_traits<double>::to_double(en[i]) /
                                                     std::pow(w, static_cast<double>(i) / x.p));
        }
    }
    return out;
}

} // namespace roughflow
