#include "roughflow/coeff.hpp"

#include <cstdlib>

namespace roughflow {

Rational rational_from_string(const std::string& s) {
    if (s.empty()) throw parse_error("empty rational literal");
    if (s.find('/') != std::string::npos) {
        try {
            return Rational(s);
        } catch (const std::exception&) {
            throw parse_error("bad rational literal: " + s);
        }
    }
    auto epos = s.find_first_of("eE");
    std::string mantissa = epos == std::string::npos ? s : s.substr(0, epos);
    long exp10 = epos == std::string::npos ? 0 : std::strtol(s.c_str() + epos + 1, nullptr, 10);
    auto dot = mantissa.find('.');
    std::string digits = mantissa;
    if (dot != std::string::npos) {
        digits = mantissa.substr(0, dot) + mantissa.substr(dot + 1);
        exp10 -= static_cast<long>(mantissa.size() - dot - 1);
    }
    bool negative = false;
    if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
        negative = digits[0] == '-';
        digits.erase(0, 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
        throw parse_error("bad rational literal: " + s);
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    Rational r{boost::multiprecision::cpp_int(digits)};
    if (negative) r = -r;
    boost::multiprecision::cpp_int pow10 = 1;
    for (long i = 0; i < (exp10 < 0 ? -exp10 : exp10); ++i) pow10 *= 10;
    if (exp10 >= 0)
        r *= Rational(pow10);
    else
        r /= Rational(pow10);
    return r;
}

double double_from_string(const std::string& s) {
    if (s.find('/') != std::string::npos) {
        return coeff_traits<Rational>::to_double(rational_from_string(s));
    }
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw parse_error("bad numeric literal: " + s);
    return v;
}

} // namespace roughflow
