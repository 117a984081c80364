#include "rfcone/rational.hpp"

namespace rfcone {

namespace {

bool parse_int(const std::string& s, Int* out) {
    if (s.empty()) return false;
    std::size_t i = 0;
    if (s[0] == '-' || s[0] == '+') i = 1;
    if (i == s.size()) return false;
    for (std::size_t j = i; j < s.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
    if (s.size() - i > 1 && s[i] == '0') return false; // no leading zeros
    *out = Int(s);
    return true;
}

} // namespace

std::optional<Rat> try_parse_rational(const std::string& s) {
    auto slash = s.find('/');
    Int num, den = 1;
    if (slash == std::string::npos) {
        if (!parse_int(s, &num)) return std::nullopt;
    } else {
        if (!parse_int(s.substr(0, slash), &num)) return std::nullopt;
        if (!parse_int(s.substr(slash + 1), &den)) return std::nullopt;
        if (den <= 0) return std::nullopt;
        if (boost::multiprecision::gcd(boost::multiprecision::abs(num), den) != 1)
            return std::nullopt; // non-reduced
    }
    return Rat(num, den);
}

Rat parse_rational(const std::string& s) {
    auto r = try_parse_rational(s);
    if (!r) throw domain_error("invalid rational '" + s + "' (need reduced n/d with d > 0)");
    return *r;
}

std::string format_rational(const Rat& q) {
    return boost::multiprecision::numerator(q).str() + "/" +
           boost::multiprecision::denominator(q).str();
}

Int rat_floor(const Rat& q) {
    Int n = boost::multiprecision::numerator(q);
    Int d = boost::multiprecision::denominator(q);
    Int f = n / d;
    if (n < 0 && f * d != n) f -= 1;
    return f;
}

bool rat_sqrt(const Rat& q, Rat* root) {
    if (q < 0) return false;
    Int n = boost::multiprecision::numerator(q);
    Int d = boost::multiprecision::denominator(q);
    Int rn = boost::multiprecision::sqrt(n);
    Int rd = boost::multiprecision::sqrt(d);
    if (rn * rn != n || rd * rd != d) return false;
    if (root) *root = Rat(rn, rd);
    return true;
}

double rat_to_double(const Rat& q) { return q.convert_to<double>(); }

} // namespace rfcone
