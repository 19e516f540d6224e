#include "coherent/rational.hpp"

#include <cctype>

#include "coherent/errors.hpp"

namespace coherent {

namespace {

bool is_integer_literal(std::string_view s) {
    if (s.empty()) return false;
    std::size_t i = (s.front() == '-') ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    const std::string_view num = text.substr(0, slash);
    const std::string_view den =
        slash == std::string_view::npos ? std::string_view("1") : text.substr(slash + 1);
    if (!is_integer_literal(num) || !is_integer_literal(den) || den.front() == '-') {
        throw InvalidParameter("not a rational literal (expected p/q): '" + std::string(text) + "'");
    }
    Integer p(std::string(num), 10);
    Integer q(std::string(den), 10);
    if (q == 0) throw InvalidParameter("zero denominator in '" + std::string(text) + "'");
    Rational r(p, q);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& value) { return value.get_str(10); }

std::string to_decimal(const Rational& value, int digits) {
    Integer scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    const bool negative = value < 0;
    const Rational mag = negative ? Rational(-value) : value;
    // round half up on |value| * 10^digits
    Integer scaled = (mag.get_num() * scale * 2 + mag.get_den()) / (mag.get_den() * 2);
    Integer whole = scaled / scale;
    Integer frac = scaled % scale;
    std::string frac_str = frac.get_str(10);
    frac_str.insert(0, static_cast<std::size_t>(digits) - frac_str.size(), '0');
    while (frac_str.size() > 1 && frac_str.back() == '0') frac_str.pop_back();
    if (frac_str.empty()) frac_str = "0";
    std::string out = (negative && scaled != 0) ? "-" : "";
    out += whole.get_str(10);
    out += '.';
    out += frac_str;
    return out;
}

Rational ratio(long num, long den) {
    if (den == 0) throw InvalidParameter("zero denominator");
    Rational r{Integer(num), Integer(den)};
    r.canonicalize();
    return r;
}

Integer ceil(const Rational& value) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
    return q;
}

}  // namespace coherent
