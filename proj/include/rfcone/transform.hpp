#pragma once

#include <variant>

#include "rfcone/algebra.hpp"
#include "rfcone/complex.hpp"

namespace rfcone {

// Graded unital algebra map to F_p annihilating the differential's image.
// Values are stored by generator name; a missing name means the
// augmentation is undefined there (partial augmentations arise when the
// domain is cut off by an action ceiling).
struct Augmentation {
    std::map<std::string, std::uint32_t> values;

    std::uint32_t value(const std::string& name) const;
    bool defined(const std::string& name) const { return values.count(name) > 0; }

    // Multiplicative extension to an element; unit goes to 1.
    std::uint32_t evaluate(const FilteredDGA& dga, const FreeElement& e) const;
};

std::vector<std::string> validate_augmentation(const FilteredDGA& dga, const Augmentation& eps);

// All graded unital maps with eps after d = 0, enumerated over assignments
// to degree-0 generators.  Throws if p^(degree-0 count) > max_candidates.
std::vector<Augmentation> find_augmentations(const FilteredDGA& dga, std::uint64_t max_candidates);

// d^eps = Psi_eps after d after Psi_eps^{-1}; same generators and actions,
// no constant terms in the new differential.
FilteredDGA conjugate_by_augmentation(const FilteredDGA& dga, const Augmentation& eps);

// Word-length-1 part of d^eps, as a filtered complex on the generator span.
FilteredComplex linearize(const FilteredDGA& dga, const Augmentation& eps);

// --- tame moves and stable tame isomorphisms --------------------------------

struct MoveElementary { // Phi(target) = unit * target + word_sum, identity elsewhere
    std::string target;
    std::uint32_t unit = 1;
    NamedElement word_sum;
};
struct MoveStabilize { // adds x, y with dy = x
    Generator x, y;
};
struct MoveDestabilize { // removes x, y with dy = x, dx = 0, unreferenced
    std::string x, y;
};
struct MoveIdentify { // degree- and differential-preserving renaming; may change actions
    std::map<std::string, std::pair<std::string, Action>> mapping; // old -> (new name, new action)
};

using TameMove = std::variant<MoveElementary, MoveStabilize, MoveDestabilize, MoveIdentify>;

struct STI {
    std::vector<TameMove> moves;
};

// Applies one move; the result is validated.  Elementary moves require
// ell(word_sum) < ell(target) and preserve the filtration.
FilteredDGA apply_tame(const FilteredDGA& dga, const TameMove& move);

FilteredDGA apply_sti(const FilteredDGA& dga, const STI& sti);

// Inverse of a single move (elementary and identify invert in place;
// stabilize <-> destabilize).
TameMove invert_move(const FilteredDGA& source_dga, const TameMove& move);

// eps' on apply_tame(dga, move) pulled back along the move to dga.
Augmentation pullback_augmentation(const FilteredDGA& dga, const TameMove& move,
                                   const Augmentation& eps_after);
Augmentation pullback_augmentation(const FilteredDGA& dga, const STI& sti,
                                   const Augmentation& eps_after);

// Normalizes dx = unit*y + lower to dx = y via elementary moves, eliminates
// every other occurrence of x and y, then destabilizes.  Returns the move
// sequence together with the destabilized DGA.
std::pair<STI, FilteredDGA> destabilize_pair(const FilteredDGA& dga, const std::string& x,
                                             const std::string& y);

// --- GL(2,Z) factorization ---------------------------------------------------

struct Mat2 {
    long long a = 1, b = 0, c = 0, d = 1; // [[a,b],[c,d]]
    bool operator==(const Mat2& o) const { return a == o.a && b == o.b && c == o.c && d == o.d; }
};

Mat2 mat2_mul(const Mat2& x, const Mat2& y);

// Factors det +-1 matrices into the generators [[1,1],[0,1]], [[1,0],[1,1]]
// (and their inverses), with one [[-1,0],[0,1]] factor when det = -1.
std::vector<Mat2> decompose_gl2z(const Mat2& m);

} // namespace rfcone
