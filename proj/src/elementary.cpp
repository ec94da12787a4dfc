#include "roughflow/elementary.hpp"

#include <map>
#include <mutex>

#include "roughflow/errors.hpp"

namespace roughflow {

Vec tree_elementary(const DecoratedTree& tau, const VectorFieldFamily& family, const Vec& a) {
    if (tau.is_unit()) return a;
    const VectorField& f = family.field(tau.decoration());
    const auto& children = tau.children();
    if (children.empty()) return f.value(a);
    if (static_cast<int>(children.size()) > f.max_order)
        throw capability_error("tree in-degree exceeds the derivative oracle order");
    std::vector<Vec> vals;
    vals.reserve(children.size());
    for (const auto& c : children) vals.push_back(tree_elementary(c, family, a));
    return f.deriv(a, vals);
}

const std::vector<std::pair<DecoratedTree, long long>>& word_tree_expansion(const Word& w) {
    static std::mutex mu;
    static std::map<std::vector<Letter>, std::vector<std::pair<DecoratedTree, long long>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(w.letters());
    if (it != cache.end()) return it->second;

    std::map<DecoratedTree, long long> acc;
    const auto& ls = w.letters();
    if (ls.empty()) throw domain_error("empty word has no tree expansion");
    acc[DecoratedTree::leaf(ls.back())] = 1;
    for (std::size_t idx = ls.size() - 1; idx-- > 0;) {
        const DecoratedTree leaf = DecoratedTree::leaf(ls[idx]);
        std::map<DecoratedTree, long long> next;
        for (const auto& [t, m] : acc)
            for (const auto& [t2, m2] : tree_mul_trees(leaf, t)) next[t2] += m * m2;
        acc = std::move(next);
    }
    std::vector<std::pair<DecoratedTree, long long>> out(acc.begin(), acc.end());
    return cache.emplace(w.letters(), std::move(out)).first->second;
}

Vec word_elementary(const Word& w, const VectorFieldFamily& family, const Vec& a) {
    if (w.is_unit()) return a;
    Vec out(static_cast<std::size_t>(family.dimension), 0.0);
    for (const auto& [t, m] : word_tree_expansion(w))
        axpy(static_cast<double>(m), tree_elementary(t, family, a), out);
    return out;
}

const std::vector<std::pair<AromaticForest, long long>>& word_operator_expansion(const Word& w) {
    static std::mutex mu;
    static std::map<std::vector<Letter>, std::vector<std::pair<AromaticForest, long long>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(w.letters());
    if (it != cache.end()) return it->second;

    const auto& ls = w.letters();
    if (ls.empty()) throw domain_error("empty word has no operator expansion");
    std::map<AromaticForest, long long> acc;
    acc[AromaticForest::from_tree(DecoratedTree::leaf(ls.back()))] = 1;
    for (std::size_t idx = ls.size() - 1; idx-- > 0;) {
        const auto vertex = AromaticForest::from_tree(DecoratedTree::leaf(ls[idx]));
        std::map<AromaticForest, long long> next;
        for (const auto& [f, m] : acc)
            for (const auto& [f2, m2] : aromatic_compose_forests(vertex, f)) next[f2] += m * m2;
        acc = std::move(next);
    }
    std::vector<std::pair<AromaticForest, long long>> out(acc.begin(), acc.end());
    return cache.emplace(w.letters(), std::move(out)).first->second;
}

Vec word_operator_apply(const Word& w, const VectorFieldFamily& family, const VectorField& g,
                        const Vec& a) {
    if (w.is_unit()) return g.value(a);
    Vec out(static_cast<std::size_t>(family.dimension), 0.0);
    for (const auto& [f, m] : word_operator_expansion(w))
        axpy(static_cast<double>(m), aromatic_operator(f, family, g, a), out);
    return out;
}

VectorField identity_field(int dimension) {
    VectorField f;
    f.max_order = 100;
    f.value = [](const Vec& a) { return a; };
    f.deriv = [dimension](const Vec&, const std::vector<Vec>& dirs) -> Vec {
        if (dirs.size() == 1) return dirs[0];
        return Vec(static_cast<std::size_t>(dimension), 0.0);
    };
    return f;
}

std::function<Vec(const Vec&)> davie_iterate(const VectorField& f, int k) {
    if (k < 0) throw domain_error("negative iterate order");
    if (k > 4) throw capability_error("davie iterate table covers orders 0..4");
    if (k >= 2 && f.max_order < k - 1)
        throw capability_error("derivative oracle order too low for this iterate");
    switch (k) {
        case 0:
            return [](const Vec& a) { return a; };
        case 1:
            return [f](const Vec& a) { return f.value(a); };
        case 2:
            return [f](const Vec& a) { return f.deriv(a, {f.value(a)}); };
        case 3:
            return [f](const Vec& a) {
                Vec v = f.value(a);
                Vec f2 = f.deriv(a, {v});
                return f.deriv(a, {v, v}) + f.deriv(a, {f2});
            };
        default:
            return [f](const Vec& a) {
                Vec v = f.value(a);
                Vec f2 = f.deriv(a, {v});
                Vec d2vv = f.deriv(a, {v, v});
                Vec out = f.deriv(a, {v, v, v});
                axpy(3.0, f.deriv(a, {f2, v}), out);
                axpy(1.0, f.deriv(a, {d2vv}), out);
                axpy(1.0, f.deriv(a, {f.deriv(a, {f2})}), out);
                return out;
            };
    }
}

Vec aromatic_operator(const AromaticForest& sigma, const VectorFieldFamily& family,
                      const VectorField& g, const Vec& a) {
    const int m = family.dimension;
    const int n = sigma.grade();
    if (n == 0) return g.value(a);
    const auto& dec = sigma.decorations();
    const auto& out_edges = sigma.out_edges();

    std::vector<std::vector<int>> in(static_cast<std::size_t>(n));
    std::vector<int> roots;
    for (int v = 0; v < n; ++v) {
        if (out_edges[static_cast<std::size_t>(v)] >= 0)
            in[static_cast<std::size_t>(out_edges[static_cast<std::size_t>(v)])].push_back(v);
        else
            roots.push_back(v);
    }
    for (int v = 0; v < n; ++v)
        if (static_cast<int>(in[static_cast<std::size_t>(v)].size()) >
            family.field(dec[static_cast<std::size_t>(v)]).max_order)
            throw capability_error("vertex in-degree exceeds the derivative oracle order");
    if (static_cast<int>(roots.size()) > 0 && g.max_order < static_cast<int>(roots.size()))
        throw capability_error("g is not differentiable to the root count of the forest");

    auto basis = [m](int i) {
        Vec e(static_cast<std::size_t>(m), 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        return e;
    };

    Vec acc(a.size(), 0.0);
    std::vector<int> idx(static_cast<std::size_t>(n), 0);
    while (true) {
        double scalar = 1.0;
        for (int v = 0; v < n && scalar != 0.0; ++v) {
            const VectorField& f = family.field(dec[static_cast<std::size_t>(v)]);
            const auto& preds = in[static_cast<std::size_t>(v)];
            Vec fv;
            if (preds.empty()) {
                fv = f.value(a);
            } else {
                std::vector<Vec> dirs;
                dirs.reserve(preds.size());
                for (int w : preds) dirs.push_back(basis(idx[static_cast<std::size_t>(w)]));
                fv = f.deriv(a, dirs);
            }
            scalar *= fv[static_cast<std::size_t>(idx[static_cast<std::size_t>(v)])];
        }
        if (scalar != 0.0) {
            if (roots.empty()) {
                axpy(scalar, g.value(a), acc);
            } else {
                std::vector<Vec> gdirs;
                gdirs.reserve(roots.size());
                for (int r : roots) gdirs.push_back(basis(idx[static_cast<std::size_t>(r)]));
                axpy(scalar, g.deriv(a, gdirs), acc);
            }
        }
        int pos = 0;
        for (; pos < n; ++pos) {
            if (idx[static_cast<std::size_t>(pos)] + 1 < m) {
                ++idx[static_cast<std::size_t>(pos)];
                break;
            }
            idx[static_cast<std::size_t>(pos)] = 0;
        }
        if (pos == n) break;
    }
    return acc;
}

NewtonianMap<Word> word_newtonian(const VectorFieldFamily& family) {
    NewtonianMap<Word> map;
    map.state_dim = family.dimension;
    map.eval_key = [family](const Word& w, const Vec& a) {
        return word_elementary(w, family, a);
    };
    return map;
}

NewtonianMap<DecoratedTree> tree_newtonian(const VectorFieldFamily& family) {
    NewtonianMap<DecoratedTree> map;
    map.state_dim = family.dimension;
    map.eval_key = [family](const DecoratedTree& t, const Vec& a) {
        return tree_elementary(t, family, a);
    };
    return map;
}

NewtonianMap<Word> matrix_right_multiplication(const std::vector<Mat>& letter_matrices) {
    if (letter_matrices.empty()) throw domain_error("need at least one letter matrix");
    const int d = letter_matrices.front().rows;
    for (const auto& m : letter_matrices)
        if (m.rows != d || m.cols != d) throw domain_error("letter matrices must share a square shape");

    auto rho = [letter_matrices, d](const Word& w) {
        Mat r = Mat::identity(d);
        for (Letter l : w.letters()) r = matmul(r, letter_matrices[l]);
        return r;
    };
    auto apply = [d](const Vec& a, const Mat& r) {
        // state is the row-major d x d matrix; value is a * r
        Mat am(d, d);
        am.a = a;
        return matmul(am, r).a;
    };

    NewtonianMap<Word> map;
    map.state_dim = d * d;
    map.eval_key = [rho, apply](const Word& w, const Vec& a) { return apply(a, rho(w)); };
    // F[beta] is linear in the state, so D F[beta](a)·v = F[beta](v)
    auto eval_copy = map.eval_key;
    map.directional_exact = [eval_copy](const GradedElement<Word, double>& beta, const Vec&,
                                        const Vec& v) {
        Vec out(v.size(), 0.0);
        for (const auto& [k, c] : beta.terms()) {
            if (k.is_unit())
                axpy(c, v, out);
            else
                axpy(c, eval_copy(k, v), out);
        }
        return out;
    };
    return map;
}

} // namespace roughflow
