#include "roughflow/rough_path.hpp"

#include <array>
#include <cmath>
#include <random>

namespace roughflow {

SuperadditivityReport check_superadditive(const ControlFunction& control, double horizon,
                                          int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, horizon);
    SuperadditivityReport rep;
    for (int i = 0; i < samples; ++i) {
        std::array<double, 3> ts{u(rng), u(rng), u(rng)};
        std::sort(ts.begin(), ts.end());
        const double gap = control(ts[0], ts[1]) + control(ts[1], ts[2]) - control(ts[0], ts[2]);
        if (gap > rep.worst_violation) {
            rep.worst_violation = gap;
            rep.worst_triple = ts;
            if (gap > 1e-12) rep.ok = false;
        }
    }
    return rep;
}

TensorRoughPath pure_area_rough_path(const Signature& sig,
                                     const std::vector<std::vector<double>>& a, double p) {
    const std::size_t d = sig.size();
    if (a.size() != d) throw domain_error("area matrix size does not match alphabet");
    double norm = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        if (a[i].size() != d) throw domain_error("area matrix is not square");
        for (std::size_t j = 0; j < d; ++j) {
            if (std::fabs(a[i][j] + a[j][i]) > 1e-14)
                throw domain_error("area matrix must be antisymmetric");
            norm += std::fabs(a[i][j]);
        }
    }
    TensorRoughPath x;
    x.sig = sig;
    x.order = 2;
    x.p = p;
    x.control = ControlFunction::time_increment();
    x.level_bounds = {1.0, 0.0, norm};
    x.eval = [sig, a, d](double s, double t) {
        WordElement<double> e = WordElement<double>::unit(sig, 2);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j)
                e.add_term(Word({static_cast<Letter>(i), static_cast<Letter>(j)}),
                           (t - s) * a[i][j]);
        e.normalize();
        return e;
    };
    return x;
}

namespace {

WordElement<double> dyadic_product(const TensorRoughPath& x, double s, double t,
                                   std::uint32_t level, int depth) {
    const long pieces = 1L << depth;
    const double h = (t - s) / static_cast<double>(pieces);
    WordElement<double> acc = WordElement<double>::unit(x.sig, level);
    // right-to-left fold, consistent with Convention 1
    for (long k = pieces - 1; k >= 0; --k) {
        const double u = s + static_cast<double>(k) * h;
        const double v = (k == pieces - 1) ? t : u + h;
        acc = mul_truncated(x(u, v).with_order(level), acc);
    }
    return acc;
}

} // namespace

GradedElement<Word, double> lyons_extend_value(const TensorRoughPath& x, double s, double t,
                                               std::uint32_t target_level, int depth,
                                               LyonsDiagnostics* diag) {
    if (target_level <= x.order)
        throw domain_error("target level must exceed the input truncation");
    // sharp sewing condition: the level-(n+1) defect must be o(omega)
    if (static_cast<double>(x.order) + 1.0 <= x.p)
        throw domain_error("lyons_extend needs n + 1 > p");
    if (t < s) throw domain_error("lyons_extend needs s <= t");
    if (t == s) return WordElement<double>::unit(x.sig, target_level);

    WordElement<double> prev = dyadic_product(x, s, t, target_level, 0);
    std::vector<std::vector<double>> increments;
    WordElement<double> cur = prev;
    int bad_streak = 0;
    std::vector<double> prev_inc;
    for (int j = 1; j <= depth; ++j) {
        cur = dyadic_product(x, s, t, target_level, j);
        auto diffs = per_grade_norms(cur - prev);
        std::vector<double> inc(diffs.size(), 0.0);
        for (std::size_t i = 0; i < diffs.size(); ++i)
            inc[i] = coeff_traits<double>::to_double(diffs[i]);
        increments.push_back(inc);
        // contraction heuristic on the extended levels
        bool contracted = true;
        if (!prev_inc.empty()) {
            for (std::size_t i = x.order + 1; i < inc.size(); ++i) {
                const double scale = 1e-13 * std::max(1.0, coeff_traits<double>::to_double(
                                                               graded_norm(cur)));
                if (inc[i] > scale && prev_inc.size() > i && prev_inc[i] > scale &&
                    inc[i] >= prev_inc[i])
                    contracted = false;
            }
        }
        bad_streak = contracted ? 0 : bad_streak + 1;
        if (bad_streak >= 3)
            throw convergence_error("dyadic refinement is not contracting; not a p-rough path "
                                    "for the requested extension");
        prev_inc = inc;
        prev = cur;
    }
    if (diag) diag->increments = std::move(increments);

    // pin levels <= n to the input
    auto pinned = project_up_to(x(s, t).with_order(target_level), x.order).with_order(target_level);
    for (std::uint32_t i = x.order + 1; i <= target_level; ++i)
        pinned = pinned + project_grade(cur, static_cast<int>(i));
    return pinned;
}

TensorRoughPath lyons_extend(const TensorRoughPath& x, std::uint32_t target_level, int depth) {
    TensorRoughPath y;
    y.sig = x.sig;
    y.order = target_level;
    y.p = x.p;
    y.control = x.control;
    y.level_bounds = x.level_bounds; // extended levels reported via hoelder_level_bounds
    struct Cache {
        std::mutex mu;
        std::map<std::pair<double, double>, WordElement<double>> values;
    };
    auto cache = std::make_shared<Cache>();
    y.eval = [x, target_level, depth, cache](double s, double t) {
        {
            std::lock_guard<std::mutex> lock(cache->mu);
            auto it = cache->values.find({s, t});
            if (it != cache->values.end()) return it->second;
        }
        auto val = lyons_extend_value(x, s, t, target_level, depth);
        std::lock_guard<std::mutex> lock(cache->mu);
        cache->values.emplace(std::make_pair(s, t), val);
        return val;
    };
    return y;
}

TreeRoughPath branched_lift_level2(const TensorRoughPath& x,
                                   const std::vector<std::array<double, 3>>& check_triples,
                                   double chen_tolerance) {
    if (x.order != 2) throw domain_error("branched lift is a level-2 construction");
    for (const auto& [r, s, t] : check_triples) {
        auto defect = chen_defect(x, r, s, t);
        for (double di : defect)
            if (di > chen_tolerance)
                throw domain_error("input violates the Chen relation beyond tolerance");
    }
    Signature tree_sig{AlgebraKind::branched_tree, x.sig.letters};
    TreeRoughPath tau;
    tau.sig = tree_sig;
    tau.order = 2;
    tau.p = x.p;
    tau.control = x.control;
    tau.level_bounds = x.level_bounds;
    tau.eval = [x, tree_sig](double s, double t) {
        return branched_lift_element(x(s, t), tree_sig);
    };
    return tau;
}

} // namespace roughflow
