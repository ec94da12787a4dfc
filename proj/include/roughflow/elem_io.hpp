#pragma once

#include <string>
#include <vector>

#include "roughflow/algebra.hpp"

namespace roughflow {

// Canonical text form: "coeff * key" terms joined by " + ", in key order;
// the zero element prints as "0". Round-trips through parse_element.
template <typename Key, typename C>
std::string print_element(const GradedElement<Key, C>& e) {
    if (e.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& [k, c] : e.terms()) {
        if (!first) s += " + ";
        first = false;
        s += coeff_traits<C>::str(c);
        s += " * ";
        s += k.encode(e.signature());
    }
    return s;
}

template <typename Key, typename C>
GradedElement<Key, C> parse_element(const Signature& sig, std::uint32_t order,
                                    const std::string& text) {
    auto trim = [](std::string s) {
        auto b = s.find_first_not_of(" \t");
        auto e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    GradedElement<Key, C> out(sig, order);
    std::string body = trim(text);
    if (body.empty() || body == "0") return out;
    std::size_t start = 0;
    while (start < body.size()) {
        auto plus = body.find(" + ", start);
        std::string term = body.substr(start, plus == std::string::npos ? std::string::npos
                                                                        : plus - start);
        start = plus == std::string::npos ? body.size() : plus + 3;
        term = trim(term);
        if (term.empty()) continue;
        std::string coeff_text = "1", key_text = term;
        if (auto star = term.find(" * "); star != std::string::npos) {
            coeff_text = trim(term.substr(0, star));
            key_text = trim(term.substr(star + 3));
        }
        out.add_term(Key::parse(sig, key_text), coeff_from_string<C>(coeff_text));
    }
    out.normalize();
    return out;
}

} // namespace roughflow
