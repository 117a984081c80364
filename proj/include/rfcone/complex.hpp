#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rfcone/action.hpp"
#include "rfcone/fp.hpp"

namespace rfcone {

struct BasisElement {
    std::string name;
    int degree = 0;
    Action action;
};

// Finite-dimensional chain complex with a compatible basis, an action
// window [a, b), and a strictly action-decreasing degree -1 differential.
// differential column j = boundary of basis element j.
struct FilteredComplex {
    GroundField field{2};
    int grading_modulus = 0;
    std::vector<BasisElement> basis;
    FpMatrix differential;
    ExtAction window_lo = ExtAction::neg_inf();
    ExtAction window_hi = ExtAction::pos_inf();

    std::size_t dim() const { return basis.size(); }
    int degree_mod(int d) const;
    std::uint32_t index_of(const std::string& name) const;

    // Minimal positive gap between distinct basis action values; nullopt if
    // fewer than two distinct values.
    std::optional<Action> min_action_gap() const;
};

struct ValidationReport;

std::vector<std::string> validate_complex(const FilteredComplex& c);
void require_valid(const FilteredComplex& c);

// Homology dimension per (canonical) degree, by exact rank computation.
std::map<int, std::size_t> homology_dims(const FilteredComplex& c);

// C^{[a,b)}: basis elements with action in [a,b); differential entries
// crossing below a are dropped.
FilteredComplex window_subquotient(const FilteredComplex& c, const ExtAction& a, const ExtAction& b);

// Chain map (or plain filtered map) of degree eps: ell(f(x)) <= ell(x) + eps.
struct DegreeEpsMap {
    const FilteredComplex* source = nullptr;
    const FilteredComplex* target = nullptr;
    FpMatrix matrix;
    Rat eps = 0;
};

// Checks ell(f(x)) <= ell(x) + eps entrywise.
bool map_has_degree_eps(const DegreeEpsMap& f);
// Checks f d_source = d_target f.
bool is_chain_map(const DegreeEpsMap& f);

// Mapping cone input: B : C01 -> C10 a chain map, with every C01 action
// strictly above every C10 action.
struct ConeData {
    FilteredComplex c01;
    FilteredComplex c10;
    FpMatrix banana; // matrix of B in the (c10 rows, c01 cols) bases
};

struct ConeOptions {
    // When set, the C10 side is regraded as n - degree - 2 (Rabinowitz
    // convention); otherwise degrees are taken as stored.
    std::optional<int> rabinowitz_shift;
};

// Block complex C10 (+) C01 with differential [[-d10, B], [0, d01]].
FilteredComplex build_cone(const ConeData& data, const ConeOptions& opts = {});

// Splits a cone-shaped complex built by build_cone back into blocks
// (first n10 basis elements are the C10 side).
struct ConeBlocks {
    std::size_t n10 = 0;
    FpMatrix d10, d01, banana;
};
ConeBlocks cone_blocks(const FilteredComplex& cone, std::size_t n10);

// Map of cones [[f10, h], [0, f01]] : Cone(B) -> Cone(B').  h must make the
// square commute up to the chain homotopy it encodes; the assembled block
// matrix is verified to be a chain map.
DegreeEpsMap cone_map(const FilteredComplex& cone_src, const FilteredComplex& cone_dst,
                      std::size_t n10_src, std::size_t n10_dst,
                      const DegreeEpsMap& f01, const DegreeEpsMap& f10, const FpMatrix& h);

// Certificate data for the small-degree homotopy-equivalence checks: a map
// pair phi, psi together with K, K' and filtered automorphisms Phi, Phi'
// witnessing psi phi = Phi + dK + Kd and phi psi = Phi' + dK' + K'd.
struct EquivalenceCertificate {
    FpMatrix phi, psi;
    FpMatrix K, K_prime;
    FpMatrix auto_src, auto_dst; // the filtered automorphisms
    Rat eps = 0;
};

struct Verdict {
    bool hypotheses_ok = false;
    bool confirmed = false;
    bool upper_triangular_units = false; // meaningful with distinct actions
    std::vector<std::string> messages;
};

// delta-gapped + delta > 4 eps + certificate identities  =>  phi is an
// isomorphism of filtered complexes with inverse psi; in a distinct-action
// basis sorted by decreasing action, phi is upper-triangular with units on
// the diagonal.
Verdict check_simple_equivalence(const FilteredComplex& c, const FilteredComplex& c_prime,
                                 const EquivalenceCertificate& cert, const Rat& delta);

// Window shape characterization of a birth/death: C^{[a+d,a+3d)} =
// C^{[a,a+4d)} two-dimensional, C'^{[a,a+4d)} = 0, homotopy equivalence of
// degree eps < delta  =>  the window complex is dx = k y for a unit k.
struct BirthDeathVerdict {
    bool hypotheses_ok = false;
    bool confirmed = false;
    std::uint32_t unit = 0; // the k with dx = k y
    std::string x_name, y_name;
    std::vector<std::string> messages;
};

BirthDeathVerdict check_birth_death_shape(const FilteredComplex& c, const FilteredComplex& c_prime,
                                          const Action& a, const Rat& delta,
                                          const EquivalenceCertificate& cert);

// Solve d_target h + h d_source = g for h (helper for building homotopy
// certificates); empty optional if no solution.
std::optional<FpMatrix> solve_homotopy(const GroundField& ff, const FpMatrix& d_source,
                                       const FpMatrix& d_target, const FpMatrix& g);

// Is m an automorphism of filtered complexes: invertible, filtration
// preserving in both directions, and a chain map.
bool is_filtered_automorphism(const FilteredComplex& c, const FpMatrix& m);

} // namespace rfcone
