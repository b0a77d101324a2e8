#include "aind/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "aind/errors.hpp"

namespace aind {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

Rational parse_integer(std::string_view s, std::string_view whole) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw InputError("malformed rational: '" + std::string(whole) + "'");
    mpz_class z(std::string(s), 10);
    return Rational(neg ? mpz_class(-z) : z);
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        neg = s.front() == '-';
        s.remove_prefix(1);
    }
    long exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view ex = s.substr(e + 1);
        bool eneg = false;
        if (!ex.empty() && (ex.front() == '-' || ex.front() == '+')) {
            eneg = ex.front() == '-';
            ex.remove_prefix(1);
        }
        if (!all_digits(ex) || ex.size() > 6)
            throw InputError("malformed rational: '" + std::string(whole) + "'");
        exponent = std::stol(std::string(ex));
        if (eneg) exponent = -exponent;
        s = s.substr(0, e);
    }
    std::string digits;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string_view ip = s.substr(0, dot), fp = s.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) ||
            (!fp.empty() && !all_digits(fp)))
            throw InputError("malformed rational: '" + std::string(whole) + "'");
        digits = std::string(ip) + std::string(fp);
        exponent -= static_cast<long>(fp.size());
    } else {
        if (!all_digits(s)) throw InputError("malformed rational: '" + std::string(whole) + "'");
        digits = std::string(s);
    }
    if (digits.empty()) digits = "0";
    mpz_class mant(digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    Rational q = exponent >= 0 ? Rational(mant * scale) : Rational(mant, scale);
    q.canonicalize();
    return neg ? Rational(-q) : q;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
        text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
        text.remove_suffix(1);
    if (text.empty()) throw InputError("empty rational");
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_integer(text.substr(0, slash), text);
        Rational den = parse_integer(text.substr(slash + 1), text);
        if (den == 0) throw InputError("zero denominator: '" + std::string(text) + "'");
        Rational q = num / den;
        q.canonicalize();
        return q;
    }
    if (text.find_first_of(".eE") != std::string_view::npos) return parse_decimal(text, text);
    return parse_integer(text, text);
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational from_double(double x) {
    if (!std::isfinite(x)) throw InputError("non-finite value where a rational is required");
    return Rational(x);
}

}  // namespace aind
