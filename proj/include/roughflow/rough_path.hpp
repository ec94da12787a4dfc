#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "roughflow/algebra.hpp"
#include "roughflow/control.hpp"
#include "roughflow/path.hpp"
#include "roughflow/tree.hpp"
#include "roughflow/word.hpp"

namespace roughflow {

// Step-n signature of a piecewise-linear path over [s, t]: per linear
// segment the truncated tensor exponential of the increment, chained by ▷
// across segments (Chen). Exact for rational scalars.
template <typename C>
WordElement<C> path_signature(const PiecewiseLinearPath<C>& path, const Signature& sig,
                              std::uint32_t n, const C& s, const C& t) {
    if (static_cast<int>(sig.size()) != path.dimension())
        throw signature_error("alphabet size does not match path dimension");
    if (t < s) throw domain_error("path_signature needs s <= t");
    auto acc = WordElement<C>::unit(sig, n);
    if (s == t) return acc;
    for (const auto& [u, v] : path.pieces(s, t)) {
        auto xu = path.value_at(u);
        auto xv = path.value_at(v);
        WordElement<C> level1(sig, n);
        for (std::size_t i = 0; i < xu.size(); ++i)
            level1.add_term(Word({static_cast<Letter>(i)}), C(xv[i] - xu[i]));
        acc = mul_truncated(acc, exp_truncated(level1));
    }
    return acc;
}

// Two-parameter family (s,t) -> group-like element with control and
// per-level Hoelder bounds. Evaluators must be pure in (s,t).
template <typename Key>
struct RoughPath {
    Signature sig;
    std::uint32_t order = 0; // truncation level n
    double p = 1.0;
    ControlFunction control = ControlFunction::time_increment();
    std::vector<double> level_bounds; // mu_i, i = 0..order (optional)
    std::function<GradedElement<Key, double>(double, double)> eval;

    GradedElement<Key, double> operator()(double s, double t) const { return eval(s, t); }
};

using TensorRoughPath = RoughPath<Word>;
using TreeRoughPath = RoughPath<DecoratedTree>;

// Per-grade graded norms of x_{r,s} ▷ x_{s,t} − x_{r,t}.
template <typename Key, typename C>
std::vector<C> chen_defect(const GradedElement<Key, C>& x_rs, const GradedElement<Key, C>& x_st,
                           const GradedElement<Key, C>& x_rt) {
    return per_grade_norms(mul_truncated(x_rs, x_st) - x_rt);
}

template <typename Key>
std::vector<double> chen_defect(const RoughPath<Key>& x, double r, double s, double t) {
    return chen_defect(x(r, s), x(s, t), x(r, t));
}

// x_{s,t} = 1 + (t-s) A on levels (0,1,2); multiplicative because the
// level-1 part vanishes and the area part is additive in t - s.
TensorRoughPath pure_area_rough_path(const Signature& sig,
                                     const std::vector<std::vector<double>>& antisymmetric,
                                     double p = 2.0);

struct LevelBoundEstimate {
    std::vector<double> mu_hat;                   // per grade 0..n
    std::vector<std::pair<double, double>> argmax; // attaining (s,t) per grade
    std::vector<char> infinite;                    // omega = 0 with nonzero level part
};

template <typename Key>
LevelBoundEstimate hoelder_level_bounds(const RoughPath<Key>& x,
                                        const std::vector<std::pair<double, double>>& grid) {
    if (grid.empty()) throw domain_error("hoelder_level_bounds needs a nonempty grid");
    const std::size_t levels = static_cast<std::size_t>(x.order) + 1;
    LevelBoundEstimate est;
    est.mu_hat.assign(levels, 0.0);
    est.argmax.assign(levels, {0.0, 0.0});
    est.infinite.assign(levels, 0);
    for (const auto& [s, t] : grid) {
        if (t < s) continue;
        auto val = x(s, t);
        auto norms = per_grade_norms(val);
        const double w = x.control(s, t);
        for (std::size_t i = 1; i < levels && i < norms.size(); ++i) {
            const double ni = coeff_traits<double>::to_double(norms[i]);
            if (w <= 0.0) {
                if (ni > 0.0) est.infinite[i] = 1;
                continue;
            }
            const double ratio = ni / std::pow(w, static_cast<double>(i) / x.p);
            if (ratio > est.mu_hat[i]) {
                est.mu_hat[i] = ratio;
                est.argmax[i] = {s, t};
            }
        }
    }
    return est;
}

struct LyonsDiagnostics {
    // increments[j][i]: |P_j^{(i)} − P_{j−1}^{(i)}| for depth j >= 1, grade i
    std::vector<std::vector<double>> increments;
};

// Value of the unique multiplicative extension at (s,t), computed as the
// ▷-product of x over the dyadic partition of [s,t] at the given depth.
// Levels <= x.order are pinned to the input. Throws convergence_error when
// per-level increments fail to contract over three successive depths.
GradedElement<Word, double> lyons_extend_value(const TensorRoughPath& x, double s, double t,
                                               std::uint32_t target_level, int depth,
                                               LyonsDiagnostics* diag = nullptr);

// Rough-path wrapper around lyons_extend_value with per-(s,t) memoization.
TensorRoughPath lyons_extend(const TensorRoughPath& x, std::uint32_t target_level, int depth);

// tau_{s,t} = 1 + sum_i x^{(1),i} •_i + sum_{ij} x^{(2),ij} ⌊•_i⌋_j.
template <typename C>
TreeElement<C> branched_lift_element(const WordElement<C>& x, const Signature& tree_sig) {
    if (x.order() != 2) throw domain_error("branched lift is a level-2 construction");
    TreeElement<C> out(tree_sig, 2);
    for (const auto& [w, c] : x.terms()) {
        const auto& ls = w.letters();
        switch (ls.size()) {
            case 0:
                out.add_term(DecoratedTree::unit(), c);
                break;
            case 1:
                out.add_term(DecoratedTree::leaf(ls[0]), c);
                break;
            default:
                out.add_term(graft({DecoratedTree::leaf(ls[0])}, ls[1]), c);
        }
    }
    out.normalize();
    return out;
}

// Rough-path version; rejects inputs whose Chen defect on the sampled
// triples exceeds the tolerance.
TreeRoughPath branched_lift_level2(const TensorRoughPath& x,
                                   const std::vector<std::array<double, 3>>& check_triples,
                                   double chen_tolerance);

// Rows of (s, t, grade, key, coefficient) for the sampled evaluations.
template <typename Key, typename C>
void append_element_rows(std::vector<std::array<std::string, 5>>& rows, const std::string& s,
                         const std::string& t, const GradedElement<Key, C>& value) {
    for (const auto& [k, c] : value.terms())
        rows.push_back({s, t, std::to_string(k.grade()), k.encode(value.signature()),
                        coeff_traits<C>::str(c)});
}

} // namespace roughflow
