#include "roughflow/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "roughflow/errors.hpp"
#include "roughflow/ode.hpp"

namespace roughflow {

LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw domain_error("fit_line needs at least two points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double denom = n * sxx - sx * sx;
    if (std::fabs(denom) < 1e-30) throw domain_error("degenerate abscissae in fit_line");
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

OrderFit fit_convergence_order(const std::vector<std::pair<double, double>>& mesh_error,
                               double noise_floor) {
    OrderFit out;
    for (const auto& [mesh, err] : mesh_error)
        if (err > noise_floor && mesh > 0.0) out.used.emplace_back(mesh, err);
    if (out.used.size() < 2) {
        out.at_noise_floor = true;
        return out;
    }
    std::vector<double> xs, ys;
    for (const auto& [mesh, err] : out.used) {
        xs.push_back(std::log(mesh));
        ys.push_back(std::log(err));
    }
    out.order = fit_line(xs, ys).slope;
    return out;
}

DavieVerdict davie_lemma_bound(const std::function<double(double, double)>& U,
                               const std::function<double(double)>& varpi, double kappa, double M,
                               const ControlFunction& control,
                               const std::vector<std::array<double, 3>>& triples) {
    DavieVerdict v;
    if (kappa >= 1.0) {
        v.message = "kappa must be < 1";
        return v;
    }
    if (std::fabs(varpi(0.0)) > 1e-15) {
        v.message = "varpi(0) != 0";
        return v;
    }
    v.bound = M / (1.0 - kappa);
    for (const auto& [r, s, t] : triples) {
        const double w_rt = control(r, t);
        // doubling condition on the observed scales
        if (w_rt > 0.0) {
            const double ratio = 2.0 * varpi(w_rt) / varpi(2.0 * w_rt);
            v.worst_kappa = std::max(v.worst_kappa, ratio);
            if (ratio > kappa + 1e-12) {
                v.message = "2 varpi(x) <= kappa varpi(2x) fails at x = " + std::to_string(w_rt);
                v.offending_triple = {r, s, t};
                return v;
            }
        }
        const double gap = U(r, t) - U(r, s) - U(s, t) - M * varpi(w_rt);
        v.worst_hypothesis_gap = std::max(v.worst_hypothesis_gap, gap);
        if (gap > 1e-12) {
            v.message = "triple hypothesis fails";
            v.offending_triple = {r, s, t};
            return v;
        }
        if (w_rt > 0.0) {
            const double pw = varpi(w_rt);
            if (pw > 0.0) v.worst_ratio = std::max(v.worst_ratio, U(r, t) / pw);
        }
    }
    if (v.worst_ratio <= v.bound + 1e-12) {
        v.pass = true;
        v.message = "ok";
    } else {
        v.message = "conclusion bound exceeded";
    }
    return v;
}

double term_sup_closed(double a, double b) {
    if (a < 0.0 || b < 0.0) throw domain_error("negative exponent in term_sup_closed");
    if (a == 0.0 && b == 0.0) return 1.0;
    if (a == 0.0 || b == 0.0) return 1.0; // supremum at the boundary
    const double s = a + b;
    return std::pow(a / s, a) * std::pow(b / s, b);
}

double term_sup_grid(double a, double b) {
    double best = 0.0, best_u = 0.5;
    const int grid = 4096;
    for (int i = 1; i < grid; ++i) {
        const double u = static_cast<double>(i) / grid;
        const double v = std::pow(u, a) * std::pow(1.0 - u, b);
        if (v > best) {
            best = v;
            best_u = u;
        }
    }
    // golden-section refinement around the best grid cell
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = std::max(0.0, best_u - 1.0 / grid);
    double hi = std::min(1.0, best_u + 1.0 / grid);
    auto f = [&](double u) { return std::pow(u, a) * std::pow(1.0 - u, b); };
    double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - phi * (hi - lo);
            f1 = f(x1);
        }
    }
    return std::max(best, std::max(f1, f2));
}

double decay_propagate(const DecayConstants& c, int level) {
    if (level <= 0) throw domain_error("propagation level must be positive");
    if (static_cast<double>(level) + c.gamma <= c.p)
        throw domain_error("divergent prefactor: level + gamma <= p");
    if (static_cast<int>(c.k.size()) < level)
        throw domain_error("missing seed constants below the requested level");
    if (static_cast<int>(c.nu.size()) <= level)
        throw domain_error("missing nu constants up to the requested level");
    const double pref = 1.0 / (1.0 - std::pow(2.0, (c.p - level - c.gamma) / c.p));
    double sum = 0.0;
    for (int j = 1; j <= level; ++j) {
        const double a = (c.gamma + level - j) / c.p;
        const double b = static_cast<double>(j) / c.p;
        sum += c.k[static_cast<std::size_t>(level - j)] * c.nu[static_cast<std::size_t>(j)] *
               term_sup_closed(a, b);
    }
    return c.path_norm * pref * sum;
}

namespace {

double fractional_factorial(double x) { return std::tgamma(x + 1.0); }

} // namespace

FactorialBudgetReport factorial_decay_check(double p, double gamma, int m, int n, double K,
                                            double path_norm) {
    if (m + gamma <= p) throw domain_error("need m + gamma > p");
    FactorialBudgetReport rep;
    rep.B = std::sqrt(p * (1.0 - std::pow(2.0, (p - m - gamma) / p)));
    DecayConstants c;
    c.p = p;
    c.gamma = gamma;
    c.n = n;
    c.path_norm = path_norm;
    for (int j = 0; j <= n; ++j) {
        rep.budget.push_back(rep.B / fractional_factorial(j / p));
        c.nu.push_back(K * rep.B / fractional_factorial(j / p));
    }
    for (int j = 0; j <= m; ++j) c.k.push_back(rep.budget[static_cast<std::size_t>(j)]);
    for (int j = m + 1; j <= n; ++j) c.k.push_back(decay_propagate(c, j));
    rep.k = c.k;
    rep.ok = true;
    for (int j = 0; j <= n; ++j) {
        const double excess =
            rep.k[static_cast<std::size_t>(j)] / rep.budget[static_cast<std::size_t>(j)] - 1.0;
        rep.worst_relative_excess = std::max(rep.worst_relative_excess, excess);
        if (excess > 1e-12) rep.ok = false;
    }
    return rep;
}

double FourPointProfile::envelope_at(double r) const {
    double val = 0.0;
    for (const auto& [rr, g] : envelope) {
        if (rr > r) break;
        val = g;
    }
    return val;
}

namespace {

FourPointProfile estimate_profile(const std::function<Vec(const Vec&)>& g, const Box& box,
                                  int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    FourPointProfile prof;
    std::uniform_real_distribution<double> scale(0.05, 0.5);

    // Lipschitz-type constant from random pairs
    for (int i = 0; i < samples; ++i) {
        Vec a = box.sample(rng), b = box.sample(rng);
        const double gap = inf_norm(a - b);
        if (gap < 1e-9) continue;
        prof.g_star = std::max(prof.g_star, inf_norm(g(a) - g(b)) / gap);
    }

    // second-difference envelope over parallelogram quadruples
    std::vector<std::pair<double, double>> raw;
    for (int i = 0; i < samples; ++i) {
        Vec x = box.sample(rng);
        Vec u = scale(rng) * (box.sample(rng) - x);
        Vec v = scale(rng) * (box.sample(rng) - x);
        const double ru = inf_norm(u), rv = inf_norm(v);
        if (ru < 1e-9 || rv < 1e-9) continue;
        Vec a = x + u + v, b = x + v, c = x + u;
        const double second = inf_norm(g(a) - g(b) - g(c) + g(x));
        raw.emplace_back(ru, second / rv);
    }
    std::sort(raw.begin(), raw.end());
    double running = 0.0;
    for (const auto& [r, q] : raw) {
        running = std::max(running, q);
        if (prof.envelope.empty() || prof.envelope.back().second < running)
            prof.envelope.emplace_back(r, running);
    }
    return prof;
}

} // namespace

FourPointProfile four_point_check(const std::function<Vec(const Vec&)>& g, const Box& box,
                                  int samples, std::uint64_t seed) {
    return estimate_profile(g, box, samples, seed);
}

FourPointFlowCheck four_point_flow_check(const VectorField& g, const Box& box, int samples,
                                         std::uint64_t seed, int substeps) {
    FourPointFlowCheck check;
    check.g_profile = estimate_profile(g.value, box, samples, seed);
    auto flow = [&g, substeps](const Vec& a) {
        return rk4_integrate([&g](const Vec& y) { return g.value(y); }, a, 1.0, substeps);
    };
    check.h_profile = estimate_profile(flow, box, samples, seed + 1);
    check.h_star_bound = std::exp(check.g_profile.g_star);
    check.h_lip = check.h_profile.g_star;
    return check;
}

} // namespace roughflow
