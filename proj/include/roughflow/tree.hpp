#pragma once

#include <map>
#include <string>
#include <vector>

#include "roughflow/algebra.hpp"

namespace roughflow {

// I-decorated rooted tree with multiset children, kept in canonical form
// (children sorted by their canonical encodings). The empty tree is the
// unit of the branched algebra; the grade is the node count.
class DecoratedTree {
  public:
    DecoratedTree() = default; // empty tree (unit)
    DecoratedTree(Letter dec, std::vector<DecoratedTree> children);

    static DecoratedTree unit() { return DecoratedTree(); }
    static DecoratedTree leaf(Letter dec) { return DecoratedTree(dec, {}); }

    bool is_unit() const { return nodes_ == 0; }
    int grade() const { return nodes_; }
    Letter decoration() const;
    const std::vector<DecoratedTree>& children() const { return children_; }

    // Alphabet-independent canonical key (AHU-style); drives ordering,
    // equality and hashing.
    const std::string& canon() const { return canon_; }

    bool operator==(const DecoratedTree& o) const { return canon_ == o.canon_; }
    bool operator<(const DecoratedTree& o) const {
        if (nodes_ != o.nodes_) return nodes_ < o.nodes_;
        return canon_ < o.canon_;
    }

    // Display form: "._a" for a single node, "[child,child]_a" otherwise.
    std::string encode(const Signature& sig) const;
    static DecoratedTree parse(const Signature& sig, const std::string& text);

  private:
    int nodes_ = 0;
    Letter dec_ = 0;
    std::vector<DecoratedTree> children_;
    std::string canon_ = "0";
};

// ⌊subtrees⌋_i — grafting the roots of the subtrees onto a new i-vertex.
DecoratedTree graft(std::vector<DecoratedTree> subtrees, Letter dec);

// The branched-algebra product of two trees:
//   sigma . •_i             = ⌊sigma⌋_i
//   sigma . ⌊t_1..t_m⌋_i    = ⌊sigma,t_1..t_m⌋_i + sum_j ⌊t_1,..,sigma.t_j,..,t_m⌋_i
// Returns the resulting trees with integer multiplicities.
std::map<DecoratedTree, long long> tree_mul_trees(const DecoratedTree& a, const DecoratedTree& b);

inline KeyProduct<DecoratedTree> key_mul(const Signature&, const DecoratedTree& a,
                                         const DecoratedTree& b) {
    if (a.is_unit()) return {{b, 1}};
    if (b.is_unit()) return {{a, 1}};
    KeyProduct<DecoratedTree> out;
    for (const auto& [t, m] : tree_mul_trees(a, b)) out.emplace_back(t, m);
    return out;
}

template <typename C>
using TreeElement = GradedElement<DecoratedTree, C>;

// Commutative multiset of trees; the unit is the empty forest. Used for
// aromatic pendants and fixture I/O.
class Forest {
  public:
    Forest() = default;
    explicit Forest(std::vector<DecoratedTree> trees);

    static Forest unit() { return Forest(); }
    bool is_unit() const { return trees_.empty(); }
    int grade() const;
    const std::vector<DecoratedTree>& trees() const { return trees_; }

    bool operator==(const Forest& o) const { return trees_ == o.trees_; }
    bool operator<(const Forest& o) const;

    std::string encode(const Signature& sig) const;

  private:
    std::vector<DecoratedTree> trees_; // sorted
};

// Enumerates all decorated trees with exactly `nodes` vertices over the
// given alphabet size (test/fixture helper).
std::vector<DecoratedTree> all_trees_of_grade(int nodes, int alphabet_size);

} // namespace roughflow
