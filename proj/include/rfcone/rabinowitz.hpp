#pragma once

#include "rfcone/barcode.hpp"
#include "rfcone/transform.hpp"

namespace rfcone {

// DGA of a two-component link: pure chords plus mixed chords in both
// directions.  Actions store chord lengths (positive); the signed action
// convention (positive for 01, negative for 10) appears in the cone.
struct LinkDGA {
    FilteredDGA dga;

    explicit LinkDGA(FilteredDGA d) : dga(std::move(d)) {}
};

// - words of d(mixed01) carry exactly zero or one mixed letter, of flavor
//   mixed01; dually for mixed10; pure chords form a sub-DGA
std::vector<std::string> validate_link_dga(const LinkDGA& link);

// Counts of disks with two positive mixed punctures, augmentation-weighted.
// Entry (x01, y10) may be nonzero only when the cone degrees differ by one
// and the signed actions decrease.
struct BananaCounts {
    std::map<std::pair<std::string, std::string>, std::uint32_t> entries; // (x01, y10) -> count
};

struct RFCComplex {
    FilteredComplex complex;   // the assembled cone
    std::size_t n10 = 0;       // first n10 basis elements form the C10 side
    int ambient_n = 0;
    ExtAction window_lo, window_hi;
};

// Linearized strip counts: d01 on mixed01 chords (degree -1 in |.|), d10 the
// dual co-differential on mixed10 chords; both restricted to the window in
// signed action and strictly signed-action-decreasing.
struct LinearizedBlocks {
    FilteredComplex c01; // signed action = +length
    FilteredComplex c10; // signed action = -length, degree as stored
};

LinearizedBlocks derive_linearized_blocks(const LinkDGA& link, const Augmentation& eps,
                                          const ExtAction& window_lo, const ExtAction& window_hi);

// Assembles the mapping cone of B out of the linearized blocks.  The counts
// must satisfy the chain-map identity B d01 = d10 B; a violation names the
// offending pair.  The C10 side is graded as ambient_n - degree - 2.
RFCComplex build_rfc(const LinkDGA& link, const Augmentation& eps, const BananaCounts& counts,
                     const ExtAction& window_lo, const ExtAction& window_hi, int ambient_n,
                     int grading_modulus = 0);

struct AcyclicityReport {
    bool acyclic = false;
    std::map<int, std::size_t> homology;
    // sufficient condition: when the positive-action generators cannot be
    // partitioned into pairs (c, d) with a(d) > a(c) and |d| - |c| = 1, the
    // complex cannot be acyclic
    bool positive_chords_pairable = false;
};

AcyclicityReport rfc_acyclicity(const RFCComplex& rfc);

} // namespace rfcone
