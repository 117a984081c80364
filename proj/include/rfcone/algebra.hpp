#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rfcone/action.hpp"
#include "rfcone/fp.hpp"

namespace rfcone {

enum class Flavor { Pure, Mixed01, Mixed10, Orbit };

std::string flavor_name(Flavor f);
Flavor flavor_from_name(const std::string& s);

struct Generator {
    std::string name;
    int degree = 0;
    Action action;
    Flavor flavor = Flavor::Pure;
};

// A word in the free algebra: ordered list of generator indices.  The empty
// word is the unit 1.
using Word = std::vector<std::uint32_t>;

// F_p-linear combination of words.  Invariant: no zero coefficients stored.
class FreeElement {
public:
    using Terms = std::map<Word, std::uint32_t>;

    FreeElement() = default;
    static FreeElement zero() { return {}; }
    static FreeElement unit(std::uint32_t coeff = 1);
    static FreeElement single(Word w, std::uint32_t coeff = 1);

    bool is_zero() const { return terms_.empty(); }
    const Terms& terms() const { return terms_; }

    void add_term(const GroundField& ff, const Word& w, std::uint32_t coeff);
    std::uint32_t coeff(const Word& w) const;

    bool operator==(const FreeElement& o) const { return terms_ == o.terms_; }
    bool operator!=(const FreeElement& o) const { return terms_ != o.terms_; }

private:
    Terms terms_;
};

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
    std::string to_string() const;
};

// Semifree unital DGA over F_p with a strictly action-decreasing degree -1
// differential and action ceiling.  grading_modulus 0 means Z-graded;
// 1 means ungraded.
class FilteredDGA {
public:
    FilteredDGA(GroundField field, int grading_modulus, ExtAction action_level = ExtAction::pos_inf());

    const GroundField& field() const { return field_; }
    int grading_modulus() const { return grading_modulus_; }
    const ExtAction& action_level() const { return action_level_; }

    std::size_t size() const { return generators_.size(); }
    const std::vector<Generator>& generators() const { return generators_; }
    const Generator& generator(std::uint32_t i) const { return generators_.at(i); }
    std::uint32_t index_of(const std::string& name) const;
    bool has_generator(const std::string& name) const;

    std::uint32_t add_generator(const Generator& g, FreeElement differential = {});
    void set_differential(std::uint32_t gen, FreeElement d);
    const FreeElement& differential(std::uint32_t gen) const { return diffs_.at(gen); }

    void remove_generators(const std::vector<std::uint32_t>& idx); // words referencing them must be gone

    // Degree reduced into [0, m) when m > 0; identity when Z-graded.
    int degree_mod(int d) const;

    // Letterwise sum; ell(1) = 0, ell(0) = -inf.
    ExtAction word_action(const Word& w) const;
    ExtAction element_action(const FreeElement& e) const;
    // Degree of a word modulo the grading; nullopt for inhomogeneous elements.
    std::optional<int> element_degree(const FreeElement& e) const;

private:
    GroundField field_;
    int grading_modulus_;
    ExtAction action_level_;
    std::vector<Generator> generators_;
    std::vector<FreeElement> diffs_;
    std::map<std::string, std::uint32_t> index_;
};

// Name-based element representation, used by moves and file formats so they
// stay valid across DGA instances with different generator orderings.
using NamedWord = std::vector<std::string>;
using NamedElement = std::map<NamedWord, std::uint32_t>;

NamedElement to_named(const FilteredDGA& dga, const FreeElement& e);
FreeElement from_named(const FilteredDGA& dga, const NamedElement& e);
NamedElement named_scale(const GroundField& ff, std::uint32_t k, const NamedElement& e);

// Same generators (name, degree, action, flavor) and same differentials,
// regardless of generator order.
bool dga_equal_named(const FilteredDGA& a, const FilteredDGA& b);

// Bilinear concatenation product.
FreeElement multiply(const FilteredDGA& dga, const FreeElement& a, const FreeElement& b);
FreeElement element_add(const FilteredDGA& dga, const FreeElement& a, const FreeElement& b);
FreeElement element_scale(const FilteredDGA& dga, std::uint32_t k, const FreeElement& a);

// Leibniz extension of the generator differential.  Signs via degree mod 2
// (only reachable in odd characteristic with an even or Z grading).
FreeElement apply_differential(const FilteredDGA& dga, const FreeElement& e);

// Checks: degree -1 differential, strict action decrease, d^2 = 0, action
// ceiling, flavor positivity, and sign well-definedness for odd p.
ValidationReport validate_dga(const FilteredDGA& dga);

void require_valid(const FilteredDGA& dga); // throws domain_error on violations

} // namespace rfcone
