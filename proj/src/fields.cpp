#include "roughflow/fields.hpp"

#include <cmath>

#include "roughflow/elementary.hpp"
#include "roughflow/errors.hpp"
#include "roughflow/word.hpp"

namespace roughflow {

DerivStrategy deriv_strategy_from_name(const std::string& name) {
    if (name == "analytic") return DerivStrategy::analytic;
    if (name == "forward") return DerivStrategy::forward;
    if (name == "fd" || name == "finite-difference") return DerivStrategy::finite_difference;
    throw config_error("unknown derivative strategy: " + name);
}

double Polynomial::eval(const Vec& x) const {
    double acc = 0.0;
    for (const auto& m : terms) {
        double t = m.coef;
        for (int i = 0; i < nvars; ++i)
            for (int e = 0; e < m.exps[static_cast<std::size_t>(i)]; ++e)
                t *= x[static_cast<std::size_t>(i)];
        acc += t;
    }
    return acc;
}

NilpotentJet Polynomial::eval(const std::vector<NilpotentJet>& x) const {
    const int k = x.empty() ? 0 : x.front().generators();
    NilpotentJet acc(k, 0.0);
    for (const auto& m : terms) {
        NilpotentJet t(k, m.coef);
        for (int i = 0; i < nvars; ++i)
            for (int e = 0; e < m.exps[static_cast<std::size_t>(i)]; ++e)
                t = t * x[static_cast<std::size_t>(i)];
        acc += t;
    }
    return acc;
}

Polynomial Polynomial::directional(const Vec& v) const {
    Polynomial out;
    out.nvars = nvars;
    for (const auto& m : terms) {
        for (int i = 0; i < nvars; ++i) {
            const int e = m.exps[static_cast<std::size_t>(i)];
            if (e == 0 || v[static_cast<std::size_t>(i)] == 0.0) continue;
            Monomial d = m;
            d.coef *= e * v[static_cast<std::size_t>(i)];
            d.exps[static_cast<std::size_t>(i)] = e - 1;
            out.terms.push_back(std::move(d));
        }
    }
    return out;
}

VectorField linear_field(const Mat& m) {
    VectorField f;
    f.max_order = 100;
    f.value = [m](const Vec& x) { return matvec(m, x); };
    f.deriv = [m](const Vec&, const std::vector<Vec>& dirs) -> Vec {
        if (dirs.empty()) throw domain_error("deriv oracle needs at least one direction");
        if (dirs.size() == 1) return matvec(m, dirs[0]);
        return Vec(static_cast<std::size_t>(m.rows), 0.0);
    };
    return f;
}

namespace {

Vec fd_directional(const std::function<Vec(const Vec&)>& value, const Vec& a,
                   const std::vector<Vec>& dirs, double h) {
    // 2^k-point central stencil for the mixed directional derivative
    const std::size_t k = dirs.size();
    const std::size_t corners = std::size_t(1) << k;
    Vec acc(a.size(), 0.0);
    for (std::size_t mask = 0; mask < corners; ++mask) {
        Vec point = a;
        int sign = 1;
        for (std::size_t i = 0; i < k; ++i) {
            const double s = (mask >> i) & 1 ? 1.0 : -1.0;
            if (s < 0) sign = -sign;
            axpy(s * h, dirs[i], point);
        }
        axpy(static_cast<double>(sign), value(point), acc);
    }
    return std::pow(2.0 * h, -static_cast<double>(k)) * acc;
}

Vec fd_deriv(const std::function<Vec(const Vec&)>& value, const Vec& a,
             const std::vector<Vec>& dirs, const FdOptions& fd) {
    if (!fd.richardson) return fd_directional(value, a, dirs, fd.step);
    Vec coarse = fd_directional(value, a, dirs, fd.step);
    Vec fine = fd_directional(value, a, dirs, fd.step / 2.0);
    // central differences carry an O(h^2) error term
    return (1.0 / 3.0) * (4.0 * fine - coarse);
}

} // namespace

VectorField polynomial_field(std::vector<Polynomial> components, DerivStrategy strategy,
                             FdOptions fd) {
    VectorField f;
    f.max_order = strategy == DerivStrategy::finite_difference ? 4 : 100;
    auto comps = std::make_shared<std::vector<Polynomial>>(std::move(components));
    f.value = [comps](const Vec& x) {
        Vec out(comps->size());
        for (std::size_t c = 0; c < comps->size(); ++c) out[c] = (*comps)[c].eval(x);
        return out;
    };
    switch (strategy) {
        case DerivStrategy::analytic:
            f.deriv = [comps](const Vec& a, const std::vector<Vec>& dirs) {
                Vec out(comps->size());
                for (std::size_t c = 0; c < comps->size(); ++c) {
                    Polynomial p = (*comps)[c];
                    for (const auto& v : dirs) p = p.directional(v);
                    out[c] = p.eval(a);
                }
                return out;
            };
            break;
        case DerivStrategy::forward:
            f.deriv = [comps](const Vec& a, const std::vector<Vec>& dirs) {
                const int k = static_cast<int>(dirs.size());
                std::vector<NilpotentJet> arg;
                arg.reserve(a.size());
                for (std::size_t i = 0; i < a.size(); ++i) {
                    NilpotentJet x(k, a[i]);
                    for (int slot = 0; slot < k; ++slot)
                        x += NilpotentJet::variable(k, 0.0, slot,
                                                    dirs[static_cast<std::size_t>(slot)][i]);
                    arg.push_back(x);
                }
                Vec out(comps->size());
                for (std::size_t c = 0; c < comps->size(); ++c)
                    out[c] = (*comps)[c].eval(arg).full_coefficient();
                return out;
            };
            break;
        case DerivStrategy::finite_difference: {
            auto value = f.value;
            f.deriv = [value, fd](const Vec& a, const std::vector<Vec>& dirs) {
                return fd_deriv(value, a, dirs, fd);
            };
            break;
        }
    }
    return f;
}

VectorField finite_difference_field(std::function<Vec(const Vec&)> value, int,
                                    int max_order, FdOptions fd) {
    VectorField f;
    f.max_order = max_order;
    f.value = value;
    f.deriv = [value, fd](const Vec& a, const std::vector<Vec>& dirs) {
        return fd_deriv(value, a, dirs, fd);
    };
    return f;
}

VectorField rotation_field(double omega, DerivStrategy strategy, FdOptions fd) {
    Mat m(2, 2);
    m(0, 1) = -omega;
    m(1, 0) = omega;
    if (strategy == DerivStrategy::analytic) return linear_field(m);
    std::vector<Polynomial> comps(2);
    comps[0].nvars = comps[1].nvars = 2;
    comps[0].terms = {{-omega, {0, 1}}};
    comps[1].terms = {{omega, {1, 0}}};
    return polynomial_field(std::move(comps), strategy, fd);
}

VectorField vanderpol_field(double mu, DerivStrategy strategy, FdOptions fd) {
    std::vector<Polynomial> comps(2);
    comps[0].nvars = comps[1].nvars = 2;
    comps[0].terms = {{1.0, {0, 1}}};
    comps[1].terms = {{mu, {0, 1}}, {-mu, {2, 1}}, {-1.0, {1, 0}}};
    return polynomial_field(std::move(comps), strategy, fd);
}

const VectorField& VectorFieldFamily::field(std::size_t letter) const {
    if (letter >= fields.size()) throw domain_error("letter index outside the family");
    return fields[letter];
}

Vec Box::sample(std::mt19937_64& rng) const {
    Vec out(lo.size());
    for (std::size_t i = 0; i < lo.size(); ++i) {
        std::uniform_real_distribution<double> u(lo[i], hi[i]);
        out[i] = u(rng);
    }
    return out;
}

FieldNorms estimate_field_norms(const VectorFieldFamily& family, int max_grade, const Box& box,
                                int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Vec> points;
    for (int i = 0; i < samples; ++i) points.push_back(box.sample(rng));
    FieldNorms norms;
    norms.nu.assign(static_cast<std::size_t>(max_grade) + 1, 0.0);

    const int d = static_cast<int>(family.letters.size());
    std::vector<std::vector<Letter>> words{{}};
    for (int g = 1; g <= max_grade; ++g) {
        std::vector<std::vector<Letter>> next;
        for (const auto& w : words)
            for (int l = 0; l < d; ++l) {
                auto nw = w;
                nw.push_back(static_cast<Letter>(l));
                next.push_back(std::move(nw));
            }
        words = std::move(next);
        double nu = 0.0;
        for (const auto& w : words) {
            for (std::size_t i = 0; i < points.size(); ++i) {
                Vec fa = word_elementary(Word(w), family, points[i]);
                nu = std::max(nu, inf_norm(fa));
                // Lipschitz difference quotients against the next sample
                const Vec& b = points[(i + 1) % points.size()];
                Vec fb = word_elementary(Word(w), family, b);
                const double gap = inf_norm(points[i] - b);
                if (gap > 1e-9) nu = std::max(nu, inf_norm(fa - fb) / gap);
            }
        }
        norms.nu[static_cast<std::size_t>(g)] = nu;
    }
    return norms;
}

} // namespace roughflow
