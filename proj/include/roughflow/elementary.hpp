#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "roughflow/aromatic.hpp"
#include "roughflow/fields.hpp"
#include "roughflow/linalg.hpp"
#include "roughflow/tree.hpp"
#include "roughflow/word.hpp"

namespace roughflow {

// F[tau](a) = D^m f_i(a) · F[tau_1](a) ⊗ ... ⊗ F[tau_m](a); F[unit] = a.
Vec tree_elementary(const DecoratedTree& tau, const VectorFieldFamily& family, const Vec& a);

// The image of a word under letter -> single vertex, multiplied out
// right-to-left in the branched algebra. F[i w] = D F[w]·F[i] then follows
// from evaluating the trees, which needs derivatives of the f_i only at
// the evaluation point.
const std::vector<std::pair<DecoratedTree, long long>>& word_tree_expansion(const Word& w);

Vec word_elementary(const Word& w, const VectorFieldFamily& family, const Vec& a);

// F†[w] as an element of the aromatic algebra: the right-to-left
// composition of the single-vertex operators of the letters. Feeding it to
// aromatic_operator evaluates F†[w]g exactly through the derivative
// oracles, including the higher-order terms of the operator product.
const std::vector<std::pair<AromaticForest, long long>>& word_operator_expansion(const Word& w);

Vec word_operator_apply(const Word& w, const VectorFieldFamily& family, const VectorField& g,
                        const Vec& a);

template <typename C>
Vec element_operator_apply(const GradedElement<Word, C>& alpha, const VectorFieldFamily& family,
                           const VectorField& g, const Vec& a) {
    Vec out(static_cast<std::size_t>(family.dimension), 0.0);
    for (const auto& [w, c] : alpha.terms()) {
        const double cd = coeff_traits<C>::to_double(c);
        if (w.is_unit())
            axpy(cd, g.value(a), out);
        else
            axpy(cd, word_operator_apply(w, family, g, a), out);
    }
    return out;
}

// g = identity with its (trivial) derivative oracle; F[alpha] = F†[alpha] id.
VectorField identity_field(int dimension);

// f^{{k}} with f^{{k+1}} = D f^{{k}} · f, as an explicit derivative-oracle
// table up to fourth order; an implementation path independent of the
// tree expansion, used to cross-check word_elementary on i^k.
std::function<Vec(const Vec&)> davie_iterate(const VectorField& f, int k);

// F†[sigma] g (a): Einstein contraction over one dummy index per vertex;
// non-root vertices contribute partial-derivative factors of their field
// components, roots differentiate g.
Vec aromatic_operator(const AromaticForest& sigma, const VectorFieldFamily& family,
                      const VectorField& g, const Vec& a);

// Linear extension of a key evaluator; the grade-0 coefficient acts on the
// identity map.
template <typename Key>
struct NewtonianMap {
    int state_dim = 0;
    std::function<Vec(const Key&, const Vec&)> eval_key;
    // optional exact directional derivative; central differences otherwise
    std::function<Vec(const GradedElement<Key, double>&, const Vec&, const Vec&)> directional_exact;
    double fd_step = 1e-6;

    Vec evaluate(const GradedElement<Key, double>& alpha, const Vec& a) const {
        Vec out(static_cast<std::size_t>(state_dim), 0.0);
        for (const auto& [k, c] : alpha.terms()) {
            if (k.is_unit())
                axpy(c, a, out);
            else
                axpy(c, eval_key(k, a), out);
        }
        return out;
    }

    std::function<Vec(const Vec&)> as_rhs(const GradedElement<Key, double>& alpha) const {
        return [this, alpha](const Vec& y) { return evaluate(alpha, y); };
    }

    Vec directional(const GradedElement<Key, double>& alpha, const Vec& a, const Vec& v) const {
        if (directional_exact) return directional_exact(alpha, a, v);
        const double scale = std::max(1.0, inf_norm(v));
        const double h = fd_step / scale;
        Vec plus = a, minus = a;
        axpy(h, v, plus);
        axpy(-h, v, minus);
        return (1.0 / (2.0 * h)) * (evaluate(alpha, plus) - evaluate(alpha, minus));
    }
};

NewtonianMap<Word> word_newtonian(const VectorFieldFamily& family);
NewtonianMap<DecoratedTree> tree_newtonian(const VectorFieldFamily& family);

// Banach-algebra model F[alpha](a) := a rho(alpha) on d x d matrices, with
// rho the word representation letter -> matrix. Linear in the state, so
// the directional derivative is exact.
NewtonianMap<Word> matrix_right_multiplication(const std::vector<Mat>& letter_matrices);

// max over sample points of |F[alpha beta](a) − D F[beta](a)·F[alpha](a)|.
template <typename Key>
double newtonian_residual(const NewtonianMap<Key>& map, const GradedElement<Key, double>& alpha,
                          const GradedElement<Key, double>& beta, const std::vector<Vec>& points) {
    double worst = 0.0;
    auto product = full_mul(alpha, beta);
    for (const auto& a : points) {
        Vec lhs = map.evaluate(product, a);
        Vec fa = map.evaluate(alpha, a);
        Vec rhs = map.directional(beta, a, fa);
        worst = std::max(worst, inf_norm(lhs - rhs));
    }
    return worst;
}

} // namespace roughflow
