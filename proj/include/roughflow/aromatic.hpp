#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "roughflow/algebra.hpp"
#include "roughflow/tree.hpp"

namespace roughflow {

// Equivalence class of directed graphs with out-degree <= 1, held in a
// canonical vertex numbering so that isomorphic inputs compare equal.
// Components are rooted trees (edges point child -> parent, the root has
// no out-edge) or aromas (one directed cycle with pendant trees).
class AromaticForest {
  public:
    AromaticForest() = default; // empty forest (unit)

    // Canonicalizes a raw digraph; out[v] is the out-edge target or -1.
    static AromaticForest from_graph(std::vector<Letter> dec, std::vector<int> out);
    static AromaticForest unit() { return AromaticForest(); }
    static AromaticForest from_tree(const DecoratedTree& t);
    static AromaticForest from_forest(const Forest& f);
    // Single aroma: directed cycle of (decoration, pendant trees) stations.
    static AromaticForest aroma(
        const std::vector<std::pair<Letter, std::vector<DecoratedTree>>>& cycle);

    bool is_unit() const { return dec_.empty(); }
    int grade() const { return static_cast<int>(dec_.size()); }
    int root_count() const;

    const std::vector<Letter>& decorations() const { return dec_; }
    const std::vector<int>& out_edges() const { return out_; }
    const std::string& canon() const { return canon_; }

    bool operator==(const AromaticForest& o) const { return canon_ == o.canon_; }
    bool operator<(const AromaticForest& o) const {
        if (dec_.size() != o.dec_.size()) return dec_.size() < o.dec_.size();
        return canon_ < o.canon_;
    }

    // Vertex/edge list form, e.g. "{0:a,1:b;0->1}"; "1" is the empty forest.
    std::string encode(const Signature& sig) const;
    static AromaticForest parse(const Signature& sig, const std::string& text);

  private:
    std::vector<Letter> dec_;
    std::vector<int> out_;
    std::string canon_;
};

// Composition product: superpose the two forests, then add edges from any
// subset of sigma's roots into vertices of tau, in every possible way
// (several roots may share a target). Returns the canonical terms with
// multiplicities.
std::map<AromaticForest, long long> aromatic_compose_forests(const AromaticForest& sigma,
                                                             const AromaticForest& tau);

inline KeyProduct<AromaticForest> key_mul(const Signature&, const AromaticForest& a,
                                          const AromaticForest& b) {
    KeyProduct<AromaticForest> out;
    for (const auto& [t, m] : aromatic_compose_forests(a, b)) out.emplace_back(t, m);
    return out;
}

template <typename C>
using AromaticElement = GradedElement<AromaticForest, C>;

// All aromatic forests with exactly `nodes` vertices over the alphabet
// size (exhaustive-check helper; feasible for small grades only).
std::vector<AromaticForest> all_aromatic_forests_of_grade(int nodes, int alphabet_size);

} // namespace roughflow
