#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rfcone/action.hpp"

namespace rfcone {

// Certified rational enclosure of e^x for rational x (Taylor with an exact
// remainder bound); width shrinks below `tolerance`.
std::pair<Rat, Rat> exp_enclosure(const Rat& x, const Rat& tolerance);

// Chord length spectrum with the action level and the shortest bad-orbit
// length hbar.
struct ChordSpectrum {
    std::vector<Rat> lengths; // strictly increasing, positive
    ExtAction hbar = ExtAction::pos_inf();
    ExtAction level = ExtAction::pos_inf(); // l <= hbar
};

std::vector<std::string> validate_spectrum(const ChordSpectrum& s);

struct BoundResult {
    bool admissible = false;
    long long bound = 0;
    std::string gate; // violated gate when inadmissible
};

// Sum of Betti numbers minus 2(k-1), admissible when osc < min(l, ell(c_k)).
BoundResult main_theorem_bound(const std::vector<long long>& betti, std::size_t k, const Rat& osc,
                               const ChordSpectrum& spectrum);

// min{ eps^2 (2 m_1 - m_q), eps^2 (m_2 - m_1), ..., eps^2 (m_q - m_{q-1}) },
// requiring 2 m_1 > m_q > 0 and strictly increasing distinct values.
Rat scf_energy_constant(const std::vector<Rat>& critical_values, const Rat& eps);

struct GrowthVerdict {
    bool ok = false;
    std::vector<std::string> violations;
};

// Every output action must be strictly below e^{2 delta} times its input
// action; decided soundly through the exponential enclosure.
GrowthVerdict action_growth_check(const std::vector<std::pair<Rat, Rat>>& pairs, const Rat& delta);

struct ConformalProfile {
    Rat f_min, f_max; // f_min <= f_max
    Rat eps;          // > 0
};

struct ExpValue {
    Rat coeff;
    Rat exponent;         // value = coeff * e^{exponent}
    Rat enclosure_lo, enclosure_hi; // certified decimal enclosure
};

struct TraceLengths {
    ExpValue len01, len10, c0;
};

// Trace cobordism lengths -e^{1+eps} f_min and e^{1+eps} f_max (clamped at
// zero) and the concatenated length e^{1+eps}(f_max - f_min).
TraceLengths trace_lengths(const ConformalProfile& profile);

// Exhaustive adversary for the surviving-bar count: chords drift toward the
// surviving cluster at rate bounded by the oscillation budget, each arrival
// may remove up to two bars, one simple event per grid slot.
struct AdversarySetup {
    std::vector<Rat> chord_actions; // positive, sorted ascending
    std::size_t morse_bars = 0;
    Rat osc;
    int steps = 8;
};

long long adversarial_min_survivors(const AdversarySetup& setup);

} // namespace rfcone
