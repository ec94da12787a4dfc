#include "roughflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "roughflow/analysis.hpp"

namespace roughflow {

AlmostFlow log_ode_flow(const TensorRoughPath& x, const NewtonianMap<Word>& map, int substeps,
                        double lie_tolerance) {
    AlmostFlow phi;
    phi.kind = "log-ode";
    phi.theta = (static_cast<double>(x.order) + 1.0) / x.p;
    phi.control = x.control;
    phi.eval = [x, map, substeps, lie_tolerance](double s, double t, const Vec& a) {
        if (s == t) return a;
        auto lambda = log_truncated(x(s, t));
        const double scale = std::max(1.0, coeff_traits<double>::to_double(graded_norm(lambda)));
        const double residual = coeff_traits<double>::to_double(lie_residual(lambda));
        if (residual > lie_tolerance * scale)
            throw domain_error("log of the driving path leaves the free Lie span; "
                               "the log-ODE right-hand side is not a vector field");
        return rk4_integrate(map.as_rhs(lambda), a, 1.0, substeps);
    };
    return phi;
}

AlmostFlow log_ode_flow(const TreeRoughPath& x, const NewtonianMap<DecoratedTree>& map,
                        int substeps) {
    AlmostFlow phi;
    phi.kind = "log-ode";
    phi.theta = (static_cast<double>(x.order) + 1.0) / x.p;
    phi.control = x.control;
    phi.eval = [x, map, substeps](double s, double t, const Vec& a) {
        if (s == t) return a;
        auto lambda = log_truncated(x(s, t));
        return rk4_integrate(map.as_rhs(lambda), a, 1.0, substeps);
    };
    return phi;
}

SchemeRun compose_scheme(const AlmostFlow& phi, const std::vector<double>& partition,
                         const Vec& a0, double blowup_cap) {
    if (partition.size() < 2) throw domain_error("partition needs at least two times");
    for (std::size_t k = 1; k < partition.size(); ++k)
        if (!(partition[k - 1] < partition[k]))
            throw domain_error("partition times must be increasing");
    SchemeRun run;
    run.times = partition;
    run.states.reserve(partition.size());
    run.states.push_back(a0);
    for (std::size_t k = 1; k < partition.size(); ++k) {
        Vec next = phi(partition[k - 1], partition[k], run.states.back());
        const double norm = inf_norm(next);
        if (!std::isfinite(norm) || norm > blowup_cap)
            throw blowup_error("scheme state exceeded the blow-up cap");
        run.states.push_back(std::move(next));
    }
    return run;
}

DefectFit almost_flow_defect(const AlmostFlow& phi,
                             const std::vector<std::array<double, 3>>& triples,
                             const std::vector<Vec>& points, double noise_floor) {
    if (points.empty()) throw domain_error("almost_flow_defect needs sample points");
    DefectFit fit;
    for (const auto& [r, s, t] : triples) {
        double defect = 0.0;
        for (const auto& a : points) {
            Vec via = phi(s, t, phi(r, s, a));
            Vec direct = phi(r, t, a);
            defect = std::max(defect, inf_norm(via - direct));
        }
        fit.table.push_back({r, s, t, phi.control(r, t), defect});
    }
    // envelope over log2-scale buckets of omega
    std::map<int, std::pair<double, double>> buckets; // bucket -> (omega, max defect)
    bool any_signal = false;
    for (const auto& row : fit.table) {
        if (row.omega <= 0.0) continue;
        const int b = static_cast<int>(std::floor(std::log2(row.omega)));
        auto& cell = buckets[b];
        if (row.defect > cell.second) cell = {row.omega, row.defect};
        if (row.defect > noise_floor) any_signal = true;
    }
    if (!any_signal) {
        fit.exact_flow = true;
        return fit;
    }
    std::vector<double> xs, ys;
    for (const auto& [b, cell] : buckets) {
        if (cell.second <= noise_floor) continue; // below measurement noise
        xs.push_back(std::log(cell.first));
        ys.push_back(std::log(cell.second));
    }
    auto line = fit_line(xs, ys);
    fit.theta_hat = line.slope;
    fit.log_L_hat = line.intercept;
    return fit;
}

CommutationReport commuting_flows_check(const VectorFieldFamily& family, std::size_t i,
                                        std::size_t j, const Vec& a,
                                        const std::vector<double>& t_grid, int substeps) {
    const VectorField& fi = family.field(i);
    const VectorField& fj = family.field(j);
    CommutationReport rep;
    Vec bracket = fj.deriv(a, {fi.value(a)}) - fi.deriv(a, {fj.value(a)});
    rep.bracket_norm = inf_norm(bracket);
    double smallest_t = 0.0;
    for (double t : t_grid) {
        if (t <= 0.0) continue;
        auto rhs_i = [&fi](const Vec& y) { return fi.value(y); };
        auto rhs_j = [&fj](const Vec& y) { return fj.value(y); };
        Vec ij = rk4_integrate(rhs_i, rk4_integrate(rhs_j, a, t, substeps), t, substeps);
        Vec ji = rk4_integrate(rhs_j, rk4_integrate(rhs_i, a, t, substeps), t, substeps);
        const double defect = inf_norm(ij - ji);
        rep.max_defect = std::max(rep.max_defect, defect);
        if (smallest_t == 0.0 || t < smallest_t) {
            smallest_t = t;
            rep.small_t_ratio = defect / (t * t);
        }
    }
    return rep;
}

} // namespace roughflow
