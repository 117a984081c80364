#pragma once

#include <variant>

#include "rfcone/complex.hpp"

namespace rfcone {

struct Bar {
    Action start;
    ExtAction end = ExtAction::pos_inf(); // finite or +inf
    int degree = 0;

    bool finite() const { return end.finite(); }
};

bool bar_less(const Bar& a, const Bar& b);
bool operator==(const Bar& a, const Bar& b);

struct Barcode {
    std::vector<Bar> bars;
    ExtAction window_lo = ExtAction::neg_inf();
    ExtAction window_hi = ExtAction::pos_inf();

    void canonicalize(); // sort into the canonical multiset order
    std::map<int, std::size_t> infinite_bars_per_degree() const;
};

bool same_bar_multiset(const Barcode& a, const Barcode& b);
std::string barcode_to_string(const Barcode& bc);

// Reduction bookkeeping, exposed for the event rules: column order is by
// (action, basis index) ascending; pairs are (birth row, death column) in
// original basis indices.
struct Reduction {
    std::vector<std::size_t> order;                       // sorted position -> basis index
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> unpaired;                    // basis indices
    FpMatrix combinations;                                // V with reduced = D * V
};

Reduction reduce_complex(const FilteredComplex& c);

// Barcode via column reduction: one finite bar [ell(birth), ell(death)) per
// pair, one infinite bar per unpaired cycle.
Barcode compute_barcode(const FilteredComplex& c);

// --- Prop-2.7-style simple bifurcations ------------------------------------

struct EventHandleSlide { // e_target += coeff * e_addend (equal degree)
    std::string target, addend;
    std::uint32_t coeff = 1;
};
struct EventBirth { // new pair with dx = unit * y
    BasisElement x, y;
    std::uint32_t unit = 1;
};
struct EventDeath { // remove the pair (x, y); dx = unit*y + lower
    std::string x, y;
};
struct EventExitBelow { std::string gen; };
struct EventEntryBelow { // new minimum-action generator; row[z] = <dz, gen>
    BasisElement gen;
    std::map<std::string, std::uint32_t> row;
};
struct EventExitAbove { std::string gen; };
struct EventEntryAbove { // new maximum-action generator with boundary column
    BasisElement gen;
    std::map<std::string, std::uint32_t> column;
};

using Event = std::variant<EventHandleSlide, EventBirth, EventDeath, EventExitBelow,
                           EventEntryBelow, EventExitAbove, EventEntryAbove>;

std::string event_kind_name(const Event& e);

// Applies one simple bifurcation.  The returned barcode is produced by the
// event's transformation rule applied to `bc` and is cross-checked against
// recomputation on the post-event complex; a mismatch throws.  Illegal
// events throw domain_error.
std::pair<Barcode, FilteredComplex> apply_event(const Barcode& bc, const FilteredComplex& c,
                                                const Event& event);

} // namespace rfcone
