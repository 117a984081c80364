#include "rfcone/action.hpp"

#include <cmath>
#include <sstream>

namespace rfcone {

namespace {

// 100-digit enclosure of pi.  Wide enough that sign decisions for any
// desk-scale q*pi + r are conclusive; if a comparison ever lands inside
// the gap we refuse rather than guess.
const Rat& pi_lo() {
    static const Rat v = Rat(
        Int("31415926535897932384626433832795028841971693993751058209749445923078"
            "164062862089986280348253421170679"),
        boost::multiprecision::pow(Int(10), 100));
    return v;
}
const Rat& pi_hi() {
    static const Rat v = pi_lo() + Rat(1, boost::multiprecision::pow(Int(10), 100));
    return v;
}

} // namespace

const Rat& pi_enclosure_lo() { return pi_lo(); }
const Rat& pi_enclosure_hi() { return pi_hi(); }

int action_sign(const Action& a) {
    if (a.pi == 0) return a.c == 0 ? 0 : (a.c < 0 ? -1 : 1);
    Rat lo, hi;
    if (a.pi > 0) {
        lo = a.pi * pi_lo() + a.c;
        hi = a.pi * pi_hi() + a.c;
    } else {
        lo = a.pi * pi_hi() + a.c;
        hi = a.pi * pi_lo() + a.c;
    }
    if (lo > 0) return 1;
    if (hi < 0) return -1;
    // q != 0 means the value is irrational, hence nonzero, but the
    // enclosure failed to separate it from 0.
    throw domain_error("pi-linear comparison exceeded enclosure precision");
}

bool operator<(const Action& a, const Action& b) { return action_sign(a - b) < 0; }
bool operator<=(const Action& a, const Action& b) { return action_sign(a - b) <= 0; }
bool operator>(const Action& a, const Action& b) { return action_sign(a - b) > 0; }
bool operator>=(const Action& a, const Action& b) { return action_sign(a - b) >= 0; }

double action_to_double(const Action& a) {
    return rat_to_double(a.pi) * 3.14159265358979323846 + rat_to_double(a.c);
}

std::string action_to_string(const Action& a) {
    if (a.is_rational()) return format_rational(a.c);
    std::ostringstream os;
    os << format_rational(a.pi) << "*pi";
    if (a.c != 0) os << (a.c > 0 ? "+" : "") << format_rational(a.c);
    return os.str();
}

bool operator<(const ExtAction& a, const ExtAction& b) {
    if (a.kind == ExtAction::NegInf) return b.kind != ExtAction::NegInf;
    if (a.kind == ExtAction::PosInf) return false;
    if (b.kind == ExtAction::NegInf) return false;
    if (b.kind == ExtAction::PosInf) return true;
    return a.value < b.value;
}

bool operator<=(const ExtAction& a, const ExtAction& b) { return !(b < a); }

std::string ext_action_to_string(const ExtAction& a) {
    switch (a.kind) {
    case ExtAction::NegInf: return "-inf";
    case ExtAction::PosInf: return "inf";
    default: return action_to_string(a.value);
    }
}

double ext_action_to_double(const ExtAction& a) {
    switch (a.kind) {
    case ExtAction::NegInf: return -std::numeric_limits<double>::infinity();
    case ExtAction::PosInf: return std::numeric_limits<double>::infinity();
    default: return action_to_double(a.value);
    }
}

} // namespace rfcone
