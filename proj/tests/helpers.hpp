#pragma once

#include <random>
#include <vector>

#include "roughflow/algebra.hpp"
#include "roughflow/aromatic.hpp"
#include "roughflow/coeff.hpp"
#include "roughflow/tree.hpp"
#include "roughflow/word.hpp"

namespace testutil {

using namespace roughflow;

inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    return Rational(num(rng), den(rng));
}

inline Word random_word(std::mt19937_64& rng, const Signature& sig, int min_grade, int max_grade) {
    std::uniform_int_distribution<int> len(min_grade, max_grade);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(sig.size()) - 1);
    std::vector<Letter> ls;
    const int k = len(rng);
    for (int i = 0; i < k; ++i) ls.push_back(static_cast<Letter>(pick(rng)));
    return Word(std::move(ls));
}

template <typename C>
WordElement<C> random_word_element(std::mt19937_64& rng, const Signature& sig, std::uint32_t order,
                                   int terms, int min_grade = 0) {
    WordElement<C> e(sig, order);
    for (int i = 0; i < terms; ++i) {
        Word w = random_word(rng, sig, min_grade, static_cast<int>(order));
        if constexpr (coeff_traits<C>::exact)
            e.add_term(w, random_rational(rng));
        else {
            std::uniform_real_distribution<double> coef(-2.0, 2.0);
            e.add_term(w, coef(rng));
        }
    }
    e.normalize();
    return e;
}

inline DecoratedTree random_tree(std::mt19937_64& rng, const Signature& sig, int nodes) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(sig.size()) - 1);
    if (nodes <= 1) return DecoratedTree::leaf(static_cast<Letter>(pick(rng)));
    // random split of the remaining nodes among up to three children
    std::uniform_int_distribution<int> nchild(1, std::min(3, nodes - 1));
    int k = nchild(rng);
    std::vector<int> sizes(static_cast<std::size_t>(k), 1);
    for (int extra = nodes - 1 - k; extra > 0; --extra)
        sizes[static_cast<std::size_t>(std::uniform_int_distribution<int>(
            0, k - 1)(rng))]++;
    std::vector<DecoratedTree> children;
    for (int s : sizes) children.push_back(random_tree(rng, sig, s));
    return DecoratedTree(static_cast<Letter>(pick(rng)), std::move(children));
}

template <typename C>
TreeElement<C> random_tree_element(std::mt19937_64& rng, const Signature& sig, std::uint32_t order,
                                   int terms, int min_grade = 0) {
    TreeElement<C> e(sig, order);
    std::uniform_int_distribution<int> g(std::max(min_grade, 0), static_cast<int>(order));
    for (int i = 0; i < terms; ++i) {
        int nodes = g(rng);
        DecoratedTree t = nodes == 0 ? DecoratedTree::unit() : random_tree(rng, sig, nodes);
        if (t.grade() < min_grade) continue;
        e.add_term(t, random_rational(rng));
    }
    e.normalize();
    return e;
}

inline AromaticForest random_aromatic(std::mt19937_64& rng, const Signature& sig, int nodes) {
    if (nodes == 0) return AromaticForest::unit();
    std::uniform_int_distribution<int> pick(0, static_cast<int>(sig.size()) - 1);
    std::uniform_int_distribution<int> tgt(-1, nodes - 1);
    std::vector<Letter> dec;
    std::vector<int> out;
    for (int v = 0; v < nodes; ++v) {
        dec.push_back(static_cast<Letter>(pick(rng)));
        out.push_back(tgt(rng));
    }
    return AromaticForest::from_graph(std::move(dec), std::move(out));
}

template <typename C>
AromaticElement<C> random_aromatic_element(std::mt19937_64& rng, const Signature& sig,
                                           std::uint32_t order, int terms, int min_grade = 0) {
    AromaticElement<C> e(sig, order);
    std::uniform_int_distribution<int> g(std::max(min_grade, 0), static_cast<int>(order));
    for (int i = 0; i < terms; ++i) {
        AromaticForest a = random_aromatic(rng, sig, g(rng));
        if (a.grade() < min_grade) continue;
        e.add_term(a, random_rational(rng));
    }
    e.normalize();
    return e;
}

// Brute-force untruncated convolution over all key pairs; the independent
// oracle for the ▷/▶ decomposition and per-grade projection checks.
template <typename Key, typename C>
GradedElement<Key, C> naive_full_product(const GradedElement<Key, C>& a,
                                         const GradedElement<Key, C>& b,
                                         std::uint32_t out_order) {
    GradedElement<Key, C> r(a.signature(), out_order);
    for (const auto& [ka, ca] : a.terms())
        for (const auto& [kb, cb] : b.terms())
            for (const auto& [k, mult] : key_mul(a.signature(), ka, kb)) {
                if (k.grade() > static_cast<int>(out_order)) continue;
                r.add_term(k, C(ca * cb * coeff_traits<C>::from_int(mult)));
            }
    r.normalize();
    return r;
}

} // namespace testutil
