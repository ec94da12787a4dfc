#pragma once

#include <string>
#include <vector>

#include "roughflow/algebra.hpp"

namespace roughflow {

// Monomial basis key for the word and tensor signatures. The empty word is
// the unit; the grade is the length.
class Word {
  public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}

    static Word unit() { return Word(); }
    bool is_unit() const { return letters_.empty(); }
    int grade() const { return static_cast<int>(letters_.size()); }

    const std::vector<Letter>& letters() const { return letters_; }

    Word concat(const Word& o) const {
        std::vector<Letter> out = letters_;
        out.insert(out.end(), o.letters_.begin(), o.letters_.end());
        return Word(std::move(out));
    }

    bool operator<(const Word& o) const {
        if (letters_.size() != o.letters_.size()) return letters_.size() < o.letters_.size();
        return letters_ < o.letters_;
    }
    bool operator==(const Word& o) const { return letters_ == o.letters_; }

    std::string encode(const Signature& sig) const {
        if (letters_.empty()) return "1";
        std::string s;
        for (Letter l : letters_) s += sig.at(l);
        return s;
    }

    static Word parse(const Signature& sig, const std::string& text) {
        if (text == "1") return unit();
        std::vector<Letter> ls;
        ls.reserve(text.size());
        for (char c : text) ls.push_back(sig.index_of(c));
        return Word(std::move(ls));
    }

  private:
    std::vector<Letter> letters_;
};

inline KeyProduct<Word> key_mul(const Signature&, const Word& a, const Word& b) {
    return {{a.concat(b), 1}};
}

template <typename C>
using WordElement = GradedElement<Word, C>;

template <typename C>
WordElement<C> letter_element(const Signature& sig, std::uint32_t order, char letter) {
    return WordElement<C>::single(sig, order, Word({sig.index_of(letter)}),
                                  coeff_traits<C>::one());
}

// Left-to-right bracketing of a word: [[..[i1,i2],i3],..,ik], expanded in
// the concatenation algebra. Carries the element's order.
template <typename C>
WordElement<C> dynkin_bracketing(const Signature& sig, std::uint32_t order, const Word& w) {
    const auto& ls = w.letters();
    if (ls.empty()) return WordElement<C>::zero(sig, order);
    WordElement<C> acc =
        WordElement<C>::single(sig, order, Word({ls[0]}), coeff_traits<C>::one());
    for (std::size_t j = 1; j < ls.size(); ++j) {
        WordElement<C> letter =
            WordElement<C>::single(sig, order, Word({ls[j]}), coeff_traits<C>::one());
        acc = lie_bracket(acc, letter);
    }
    return acc;
}

// Projection onto the free Lie span, grade by grade, via the Dynkin map
// w -> (1/|w|) [[..[i1,i2],..],ik]. Fixes Lie elements (Dynkin-Specht-
// Wever), so alpha is in the Lie span iff alpha == lie_project(alpha)
// (with vanishing grade-0 part). Word/tensor signatures only.
template <typename C>
WordElement<C> lie_project(const WordElement<C>& a) {
    if (a.signature().kind != AlgebraKind::word && a.signature().kind != AlgebraKind::tensor)
        throw domain_error("lie_project is defined for word/tensor signatures only");
    WordElement<C> r(a.signature(), a.order());
    for (const auto& [w, c] : a.terms()) {
        const int g = w.grade();
        if (g == 0) continue; // grade-0 part has no Lie component
        WordElement<C> br = dynkin_bracketing<C>(a.signature(), a.order(), w);
        C scale = C(c / coeff_traits<C>::from_int(g));
        r = r + scale * br;
    }
    return r;
}

// Graded norm of alpha − lie_project(alpha); zero iff alpha is Lie (exact
// mode) up to the grade-0 part, which must vanish separately.
template <typename C>
C lie_residual(const WordElement<C>& a) {
    return graded_norm(a - lie_project(a)) + coeff_traits<C>::abs(a.coeff(Word::unit()));
}

} // namespace roughflow
