#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <optional>
#include <stdexcept>
#include <string>

namespace rfcone {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Raised by operations whose domain preconditions fail (bad input data,
// illegal moves, certificate mismatches).  Distinct from usage errors,
// which the CLI maps to a different exit code.
class domain_error : public std::runtime_error {
public:
    explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// "n" or "n/d" with d > 0.  Strict: the fraction must already be reduced,
// so serialized documents have a unique byte representation.
Rat parse_rational(const std::string& s);
std::optional<Rat> try_parse_rational(const std::string& s);

// Always "n/d" with d >= 1, gcd(n,d) = 1.
std::string format_rational(const Rat& q);

// Floor of numerator/denominator as an Int.
Int rat_floor(const Rat& q);

// true iff q is a square of a rational; if so *root is the nonnegative root.
bool rat_sqrt(const Rat& q, Rat* root);

double rat_to_double(const Rat& q);

} // namespace rfcone
