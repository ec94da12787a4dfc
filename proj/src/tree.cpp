#include "roughflow/tree.hpp"

#include <algorithm>

#include "roughflow/errors.hpp"

namespace roughflow {

DecoratedTree::DecoratedTree(Letter dec, std::vector<DecoratedTree> children)
    : dec_(dec), children_(std::move(children)) {
    nodes_ = 1;
    for (const auto& c : children_) {
        if (c.is_unit()) throw domain_error("empty tree cannot be a child");
        nodes_ += c.grade();
    }
    std::sort(children_.begin(), children_.end(),
              [](const DecoratedTree& a, const DecoratedTree& b) { return a.canon() < b.canon(); });
    canon_.clear();
    canon_ += '(';
    for (const auto& c : children_) canon_ += c.canon();
    canon_ += ')';
    canon_ += static_cast<char>('A' + dec_);
}

Letter DecoratedTree::decoration() const {
    if (is_unit()) throw domain_error("unit tree has no decoration");
    return dec_;
}

std::string DecoratedTree::encode(const Signature& sig) const {
    if (is_unit()) return "1";
    if (children_.empty()) return std::string("._") + sig.at(dec_);
    std::string s = "[";
    for (std::size_t i = 0; i < children_.size(); ++i) {
        if (i) s += ',';
        s += children_[i].encode(sig);
    }
    s += "]_";
    s += sig.at(dec_);
    return s;
}

namespace {

DecoratedTree parse_tree(const Signature& sig, const std::string& text, std::size_t& pos) {
    if (pos >= text.size()) throw parse_error("unexpected end of tree literal");
    if (text[pos] == '.') {
        if (pos + 2 >= text.size() || text[pos + 1] != '_')
            throw parse_error("expected ._<letter> in tree literal");
        Letter dec = sig.index_of(text[pos + 2]);
        pos += 3;
        return DecoratedTree::leaf(dec);
    }
    if (text[pos] != '[') throw parse_error("expected '[' or '.' in tree literal");
    ++pos;
    std::vector<DecoratedTree> children;
    while (pos < text.size() && text[pos] != ']') {
        children.push_back(parse_tree(sig, text, pos));
        if (pos < text.size() && text[pos] == ',') ++pos;
    }
    if (pos >= text.size() || text[pos] != ']') throw parse_error("unbalanced '[' in tree literal");
    ++pos;
    if (pos + 1 >= text.size() || text[pos] != '_')
        throw parse_error("expected _<letter> after ']'");
    Letter dec = sig.index_of(text[pos + 1]);
    pos += 2;
    return DecoratedTree(dec, std::move(children));
}

} // namespace

DecoratedTree DecoratedTree::parse(const Signature& sig, const std::string& text) {
    if (text == "1") return unit();
    std::size_t pos = 0;
    DecoratedTree t = parse_tree(sig, text, pos);
    if (pos != text.size()) throw parse_error("trailing characters in tree literal: " + text);
    return t;
}

DecoratedTree graft(std::vector<DecoratedTree> subtrees, Letter dec) {
    return DecoratedTree(dec, std::move(subtrees));
}

std::map<DecoratedTree, long long> tree_mul_trees(const DecoratedTree& a, const DecoratedTree& b) {
    std::map<DecoratedTree, long long> out;
    if (a.is_unit() || b.is_unit())
        throw domain_error("tree_mul_trees expects non-empty trees");
    const auto& kids = b.children();
    {
        std::vector<DecoratedTree> merged = kids;
        merged.push_back(a);
        out[graft(std::move(merged), b.decoration())] += 1;
    }
    for (std::size_t j = 0; j < kids.size(); ++j) {
        for (const auto& [sub, mult] : tree_mul_trees(a, kids[j])) {
            std::vector<DecoratedTree> replaced;
            replaced.reserve(kids.size());
            for (std::size_t i = 0; i < kids.size(); ++i)
                replaced.push_back(i == j ? sub : kids[i]);
            out[graft(std::move(replaced), b.decoration())] += mult;
        }
    }
    return out;
}

Forest::Forest(std::vector<DecoratedTree> trees) : trees_(std::move(trees)) {
    for (const auto& t : trees_)
        if (t.is_unit()) throw domain_error("empty tree cannot be a forest member");
    std::sort(trees_.begin(), trees_.end());
}

int Forest::grade() const {
    int g = 0;
    for (const auto& t : trees_) g += t.grade();
    return g;
}

bool Forest::operator<(const Forest& o) const {
    return std::lexicographical_compare(trees_.begin(), trees_.end(), o.trees_.begin(),
                                        o.trees_.end());
}

std::string Forest::encode(const Signature& sig) const {
    if (trees_.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < trees_.size(); ++i) {
        if (i) s += ' ';
        s += trees_[i].encode(sig);
    }
    return s;
}

namespace {

// Multisets of trees with total grade `total`, each tree drawn from the
// (ordered) pool, non-decreasing pool indices to avoid duplicates.
void multisets_rec(const std::vector<std::vector<DecoratedTree>>& by_grade, int total,
                   std::size_t min_grade, const DecoratedTree* min_tree,
                   std::vector<DecoratedTree>& acc,
                   std::vector<std::vector<DecoratedTree>>& out) {
    if (total == 0) {
        out.push_back(acc);
        return;
    }
    for (std::size_t g = min_grade; g <= static_cast<std::size_t>(total); ++g) {
        for (const auto& t : by_grade[g]) {
            if (g == min_grade && min_tree && t.canon() < min_tree->canon()) continue;
            acc.push_back(t);
            multisets_rec(by_grade, total - static_cast<int>(g), g, &t, acc, out);
            acc.pop_back();
        }
    }
}

} // namespace

std::vector<DecoratedTree> all_trees_of_grade(int nodes, int alphabet_size) {
    if (nodes <= 0) return {};
    static_assert(sizeof(Letter) == 1, "letters are byte indices");
    std::vector<std::vector<DecoratedTree>> by_grade(static_cast<std::size_t>(nodes) + 1);
    for (int n = 1; n <= nodes; ++n) {
        std::vector<DecoratedTree> level;
        // children form a multiset of total grade n-1
        std::vector<std::vector<DecoratedTree>> child_sets;
        std::vector<DecoratedTree> acc;
        multisets_rec(by_grade, n - 1, 1, nullptr, acc, child_sets);
        for (int d = 0; d < alphabet_size; ++d) {
            for (auto cs : child_sets)
                level.push_back(DecoratedTree(static_cast<Letter>(d), std::move(cs)));
        }
        std::sort(level.begin(), level.end());
        level.erase(std::unique(level.begin(), level.end()), level.end());
        by_grade[static_cast<std::size_t>(n)] = std::move(level);
    }
    return by_grade[static_cast<std::size_t>(nodes)];
}

} // namespace roughflow
