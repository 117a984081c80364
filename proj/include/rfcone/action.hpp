#pragma once

#include "rfcone/rational.hpp"

namespace rfcone {

// Action value of the form pi_coeff * pi + rational_part.  Plain rational
// actions have pi_coeff == 0.  Comparisons are exact: equal coefficient
// pairs compare equal, and any other pair is separated by a certified
// rational enclosure of pi (pi is irrational, so q*pi + r == 0 forces
// q == r == 0).
struct Action {
    Rat pi;
    Rat c;

    Action() : pi(0), c(0) {}
    Action(Rat constant) : pi(0), c(std::move(constant)) {} // NOLINT implicit
    Action(Rat pi_coeff, Rat constant) : pi(std::move(pi_coeff)), c(std::move(constant)) {}

    bool is_rational() const { return pi == 0; }
    bool is_zero() const { return pi == 0 && c == 0; }

    Action operator+(const Action& o) const { return {pi + o.pi, c + o.c}; }
    Action operator-(const Action& o) const { return {pi - o.pi, c - o.c}; }
    Action operator-() const { return {-pi, -c}; }
    Action operator*(const Rat& k) const { return {pi * k, c * k}; }

    bool operator==(const Action& o) const { return pi == o.pi && c == o.c; }
    bool operator!=(const Action& o) const { return !(*this == o); }
};

// -1, 0, +1 by the exact value of a (as q*pi + r).
int action_sign(const Action& a);

// Certified rational enclosure of pi used by the exact comparisons.
const Rat& pi_enclosure_lo();
const Rat& pi_enclosure_hi();

bool operator<(const Action& a, const Action& b);
bool operator<=(const Action& a, const Action& b);
bool operator>(const Action& a, const Action& b);
bool operator>=(const Action& a, const Action& b);

double action_to_double(const Action& a);
std::string action_to_string(const Action& a);

// Action extended with the two infinities (window bounds, bar endpoints,
// ell(0) = -inf).
struct ExtAction {
    enum Kind { NegInf, Finite, PosInf };
    Kind kind = Finite;
    Action value;

    ExtAction() = default;
    ExtAction(Action a) : kind(Finite), value(std::move(a)) {} // NOLINT implicit
    static ExtAction neg_inf() { ExtAction e; e.kind = NegInf; return e; }
    static ExtAction pos_inf() { ExtAction e; e.kind = PosInf; return e; }

    bool finite() const { return kind == Finite; }
    bool operator==(const ExtAction& o) const {
        if (kind != o.kind) return false;
        return kind != Finite || value == o.value;
    }
    bool operator!=(const ExtAction& o) const { return !(*this == o); }
};

bool operator<(const ExtAction& a, const ExtAction& b);
bool operator<=(const ExtAction& a, const ExtAction& b);

std::string ext_action_to_string(const ExtAction& a);
double ext_action_to_double(const ExtAction& a);

// Deterministic total order for containers keyed by Action.
struct ActionKeyLess {
    bool operator()(const Action& a, const Action& b) const {
        if (a.pi != b.pi) return a.pi < b.pi;
        return a.c < b.c;
    }
};

} // namespace rfcone
