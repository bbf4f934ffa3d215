#include "freelunch/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace freelunch {
namespace {

bool is_integer_literal(std::string_view s, bool allow_sign) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; });
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den = slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_literal(num, true) || !is_integer_literal(den, false)) {
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
    std::string n(num);
    if (n[0] == '+') n.erase(0, 1);
    boost::multiprecision::mpz_int p(n), q{std::string(den)};
    if (q == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
}

std::string format_rational(const Rational& value) {
    return numerator(value).str() + "/" + denominator(value).str();
}

bool is_zero(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

}  // namespace freelunch
