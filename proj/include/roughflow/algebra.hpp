#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "roughflow/coeff.hpp"
#include "roughflow/errors.hpp"

namespace roughflow {

enum class AlgebraKind : std::uint8_t { word, tensor, branched_tree, aromatic };

inline const char* kind_name(AlgebraKind k) {
    switch (k) {
        case AlgebraKind::word: return "word";
        case AlgebraKind::tensor: return "tensor";
        case AlgebraKind::branched_tree: return "branched-tree";
        case AlgebraKind::aromatic: return "aromatic";
    }
    return "?";
}

// Letters are stored as indices into the signature's alphabet.
using Letter = std::uint8_t;

struct Signature {
    AlgebraKind kind = AlgebraKind::word;
    std::string letters; // ordered alphabet, e.g. "ab"

    bool operator==(const Signature& o) const {
        return kind == o.kind && letters == o.letters;
    }
    bool operator!=(const Signature& o) const { return !(*this == o); }

    std::size_t size() const { return letters.size(); }

    Letter index_of(char c) const {
        auto pos = letters.find(c);
        if (pos == std::string::npos)
            throw domain_error(std::string("letter '") + c + "' not in alphabet \"" + letters + '"');
        return static_cast<Letter>(pos);
    }
    char at(Letter i) const {
        if (i >= letters.size()) throw domain_error("letter index out of range");
        return letters[i];
    }
};

inline constexpr std::uint32_t unbounded_order = std::numeric_limits<std::uint32_t>::max();

// One structural product term: key and integer multiplicity. Word
// concatenation yields a single term; tree grafting and aromatic
// composition yield several.
template <typename Key>
using KeyProduct = std::vector<std::pair<Key, long long>>;

// A finite linear combination of graded basis keys, truncated at `order`.
// Immutable value type: all algebra operations below return new elements.
template <typename Key, typename C>
class GradedElement {
  public:
    using key_type = Key;
    using coeff_type = C;
    using term_map = std::map<Key, C>;

    GradedElement() = default;
    GradedElement(Signature sig, std::uint32_t order)
        : sig_(std::move(sig)), order_(order) {}

    static GradedElement zero(Signature sig, std::uint32_t order) {
        return GradedElement(std::move(sig), order);
    }
    static GradedElement unit(Signature sig, std::uint32_t order) {
        GradedElement e(std::move(sig), order);
        e.terms_[Key::unit()] = coeff_traits<C>::one();
        return e;
    }
    static GradedElement single(Signature sig, std::uint32_t order, Key k, C c) {
        GradedElement e(std::move(sig), order);
        if (k.grade() > static_cast<int>(order))
            throw domain_error("key grade exceeds truncation order");
        if (!coeff_traits<C>::is_zero(c)) e.terms_[std::move(k)] = std::move(c);
        return e;
    }

    const Signature& signature() const { return sig_; }
    std::uint32_t order() const { return order_; }
    const term_map& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    C coeff(const Key& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? coeff_traits<C>::zero() : it->second;
    }

    int min_grade() const { // grade of the lowest nonzero component; -1 if zero
        int g = -1;
        for (const auto& [k, c] : terms_) {
            int kg = k.grade();
            if (g < 0 || kg < g) g = kg;
        }
        return g;
    }

    void add_term(const Key& k, const C& c) {
        if (k.grade() > static_cast<int>(order_))
            throw domain_error("key grade exceeds truncation order");
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            if (!coeff_traits<C>::is_zero(c)) terms_[k] = c;
        } else {
            it->second += c;
            if (coeff_traits<C>::is_zero(it->second)) terms_.erase(it);
        }
    }

    // Prunes numerically negligible coefficients (exact zeros in exact mode).
    void normalize() {
        if constexpr (coeff_traits<C>::exact) {
            for (auto it = terms_.begin(); it != terms_.end();)
                it = coeff_traits<C>::is_zero(it->second) ? terms_.erase(it) : std::next(it);
        } else {
            C max_mag = coeff_traits<C>::zero();
            for (const auto& [k, c] : terms_) {
                C a = coeff_traits<C>::abs(c);
                if (a > max_mag) max_mag = a;
            }
            for (auto it = terms_.begin(); it != terms_.end();)
                it = coeff_traits<C>::negligible(it->second, max_mag) ? terms_.erase(it)
                                                                      : std::next(it);
        }
    }

    // Re-tags the truncation order; refuses to drop stored terms silently.
    GradedElement with_order(std::uint32_t new_order) const {
        for (const auto& [k, c] : terms_)
            if (k.grade() > static_cast<int>(new_order))
                throw domain_error("with_order would drop stored terms; use project_up_to");
        GradedElement e(sig_, new_order);
        e.terms_ = terms_;
        return e;
    }

    bool operator==(const GradedElement& o) const {
        return sig_ == o.sig_ && order_ == o.order_ && terms_ == o.terms_;
    }
    bool operator!=(const GradedElement& o) const { return !(*this == o); }

  private:
    Signature sig_;
    std::uint32_t order_ = 0;
    term_map terms_;
};

namespace detail {

template <typename Key, typename C>
void check_same_signature(const GradedElement<Key, C>& a, const GradedElement<Key, C>& b) {
    if (a.signature() != b.signature())
        throw signature_error("algebra signature mismatch");
}

template <typename Key, typename C>
void check_same_order(const GradedElement<Key, C>& a, const GradedElement<Key, C>& b) {
    if (a.order() != b.order())
        throw signature_error("truncation order mismatch");
}

} // namespace detail

template <typename Key, typename C>
GradedElement<Key, C> operator+(const GradedElement<Key, C>& a, const GradedElement<Key, C>& b) {
    detail::check_same_signature(a, b);
    detail::check_same_order(a, b);
    GradedElement<Key, C> r = a;
    for (const auto& [k, c] : b.terms()) r.add_term(k, c);
    r.normalize();
    return r;
}

template <typename Key, typename C>
GradedElement<Key, C> operator-(const GradedElement<Key, C>& a, const GradedElement<Key, C>& b) {
    detail::check_same_signature(a, b);
    detail::check_same_order(a, b);
    GradedElement<Key, C> r = a;
    for (const auto& [k, c] : b.terms()) r.add_term(k, C(-c));
    r.normalize();
    return r;
}

template <typename Key, typename C>
GradedElement<Key, C> operator*(const C& s, const GradedElement<Key, C>& a) {
    GradedElement<Key, C> r(a.signature(), a.order());
    if (coeff_traits<C>::is_zero(s)) return r;
    for (const auto& [k, c] : a.terms()) r.add_term(k, C(s * c));
    r.normalize();
    return r;
}

template <typename Key, typename C>
GradedElement<Key, C> operator-(const GradedElement<Key, C>& a) {
    return C(-coeff_traits<C>::one()) * a;
}

namespace detail {

// Shared kernel of the three product flavours: accumulates a^(i) b^(j)
// for grades i+j in [lo, hi] into an element carried at `out_order`.
template <typename Key, typename C>
GradedElement<Key, C> convolve(const GradedElement<Key, C>& a, const GradedElement<Key, C>& b,
                               long lo, long hi, std::uint32_t out_order) {
    GradedElement<Key, C> r(a.signature(), out_order);
    for (const auto& [ka, ca] : a.terms()) {
        const long ga = ka.grade();
        for (const auto& [kb, cb] : b.terms()) {
            const long g = ga + kb.grade();
            if (g < lo || g > hi) continue;
            for (const auto& [k, mult] : key_mul(a.signature(), ka, kb)) {
                C term = ca * cb;
                if (mult != 1) term *= coeff_traits<C>::from_int(mult);
                r.add_term(k, term);
            }
        }
    }
    r.normalize();
    return r;
}

} // namespace detail

// a ▷ b : grades <= n of the full product. Requires both operands carried
// at the same (finite) truncation order n.
template <typename Key, typename C>
GradedElement<Key, C> mul_truncated(const GradedElement<Key, C>& a, const GradedElement<Key, C>& b) {
    detail::check_same_signature(a, b);
    detail::check_same_order(a, b);
    if (a.order() == unbounded_order)
        throw domain_error("mul_truncated needs a finite truncation order");
    const long n = static_cast<long>(a.order());
    return detail::convolve(a, b, 0, n, a.order());
}

// a ▶ b : grades n+1..2n of the full product, carried at order 2n.
template <typename Key, typename C>
GradedElement<Key, C> mul_overflow(const GradedElement<Key, C>& a, const GradedElement<Key, C>& b) {
    detail::check_same_signature(a, b);
    detail::check_same_order(a, b);
    if (a.order() == unbounded_order)
        throw domain_error("mul_overflow needs a finite truncation order");
    const long n = static_cast<long>(a.order());
    return detail::convolve(a, b, n + 1, 2 * n, static_cast<std::uint32_t>(2 * n));
}

// Untruncated product (grades bounded by the operands' stored content).
template <typename Key, typename C>
GradedElement<Key, C> full_mul(const GradedElement<Key, C>& a, const GradedElement<Key, C>& b) {
    detail::check_same_signature(a, b);
    std::uint32_t out = (a.order() == unbounded_order || b.order() == unbounded_order)
                            ? unbounded_order
                            : a.order() + b.order();
    return detail::convolve(a, b, 0, std::numeric_limits<long>::max(), out);
}

template <typename Key, typename C>
GradedElement<Key, C> project_grade(const GradedElement<Key, C>& a, int i) {
    GradedElement<Key, C> r(a.signature(), a.order());
    for (const auto& [k, c] : a.terms())
        if (k.grade() == i) r.add_term(k, c);
    return r;
}

// alpha^{(<= n)}; the result is carried at order n (quotient map).
template <typename Key, typename C>
GradedElement<Key, C> project_up_to(const GradedElement<Key, C>& a, std::uint32_t n) {
    GradedElement<Key, C> r(a.signature(), n);
    for (const auto& [k, c] : a.terms())
        if (k.grade() <= static_cast<int>(n)) r.add_term(k, c);
    return r;
}

// |alpha| = sum of absolute coefficient values; exact in rational mode.
template <typename Key, typename C>
C graded_norm(const GradedElement<Key, C>& a) {
    C s = coeff_traits<C>::zero();
    for (const auto& [k, c] : a.terms()) s += coeff_traits<C>::abs(c);
    return s;
}

// Per-grade norms |alpha^(i)| for i = 0..order (or max stored grade).
template <typename Key, typename C>
std::vector<C> per_grade_norms(const GradedElement<Key, C>& a) {
    int top = 0;
    for (const auto& [k, c] : a.terms()) top = std::max(top, k.grade());
    if (a.order() != unbounded_order) top = std::max<int>(top, static_cast<int>(a.order()));
    std::vector<C> out(static_cast<std::size_t>(top) + 1, coeff_traits<C>::zero());
    for (const auto& [k, c] : a.terms())
        out[static_cast<std::size_t>(k.grade())] += coeff_traits<C>::abs(c);
    return out;
}

// expG(a) = sum_k a^{▷k} / k! ; powers are right-associated so the series
// is well defined in the non-associative (tree) signature as well. The sum
// terminates at k = n because a has no grade-0 part.
template <typename Key, typename C>
GradedElement<Key, C> exp_truncated(const GradedElement<Key, C>& a) {
    if (a.order() == unbounded_order)
        throw domain_error("exp_truncated needs a finite truncation order");
    if (!coeff_traits<C>::is_zero(a.coeff(Key::unit())))
        throw domain_error("exp_truncated requires a vanishing grade-0 part");
    GradedElement<Key, C> r = GradedElement<Key, C>::unit(a.signature(), a.order());
    GradedElement<Key, C> power = GradedElement<Key, C>::unit(a.signature(), a.order());
    C factorial = coeff_traits<C>::one();
    for (std::uint32_t k = 1; k <= a.order(); ++k) {
        power = mul_truncated(a, power); // a^{▷k} = a ▷ a^{▷(k-1)}
        if (power.is_zero()) break;
        factorial *= coeff_traits<C>::from_int(k);
        GradedElement<Key, C> scaled(a.signature(), a.order());
        for (const auto& [key, c] : power.terms()) scaled.add_term(key, C(c / factorial));
        r = r + scaled;
    }
    return r;
}

// logG(1 + u) = sum_{k>=1} (-1)^{k+1} u^{▷k} / k on elements with unit
// grade-0 part.
template <typename Key, typename C>
GradedElement<Key, C> log_truncated(const GradedElement<Key, C>& a) {
    if (a.order() == unbounded_order)
        throw domain_error("log_truncated needs a finite truncation order");
    const C unit_coeff = a.coeff(Key::unit());
    if constexpr (coeff_traits<C>::exact) {
        if (unit_coeff != coeff_traits<C>::one())
            throw domain_error("log_truncated requires grade-0 coefficient 1");
    } else {
        if (coeff_traits<C>::abs(C(unit_coeff - coeff_traits<C>::one())) > 1e-12)
            throw domain_error("log_truncated requires grade-0 coefficient 1");
    }
    GradedElement<Key, C> u = a;
    u.add_term(Key::unit(), C(-unit_coeff));
    GradedElement<Key, C> r(a.signature(), a.order());
    GradedElement<Key, C> power = GradedElement<Key, C>::unit(a.signature(), a.order());
    for (std::uint32_t k = 1; k <= a.order(); ++k) {
        power = mul_truncated(u, power);
        if (power.is_zero()) break;
        const C sign = coeff_traits<C>::from_int(k % 2 == 1 ? 1 : -1);
        GradedElement<Key, C> scaled(a.signature(), a.order());
        for (const auto& [key, c] : power.terms())
            scaled.add_term(key, C(sign * c / coeff_traits<C>::from_int(k)));
        r = r + scaled;
    }
    return r;
}

// a ⊛ b = logG(expG(a) ▷ expG(b)); the truncated BCHD group law.
template <typename Key, typename C>
GradedElement<Key, C> bchd(const GradedElement<Key, C>& a, const GradedElement<Key, C>& b) {
    detail::check_same_signature(a, b);
    detail::check_same_order(a, b);
    return log_truncated(mul_truncated(exp_truncated(a), exp_truncated(b)));
}

// ⟦a,b⟧ = a ▷ b − b ▷ a.
template <typename Key, typename C>
GradedElement<Key, C> lie_bracket(const GradedElement<Key, C>& a, const GradedElement<Key, C>& b) {
    return mul_truncated(a, b) - mul_truncated(b, a);
}

// Chained ▷-product, right to left: t_1 ▷ (t_2 ▷ (... ▷ t_m)). This is the
// reading of iterated products in non-associative signatures.
template <typename Key, typename C>
GradedElement<Key, C> chain_mul_truncated(const std::vector<GradedElement<Key, C>>& factors) {
    if (factors.empty()) throw domain_error("chain_mul_truncated needs at least one factor");
    GradedElement<Key, C> acc = factors.back();
    for (std::size_t i = factors.size() - 1; i-- > 0;) acc = mul_truncated(factors[i], acc);
    return acc;
}

} // namespace roughflow
