#pragma once

#include "rfcone/barcode.hpp"

namespace rfcone {

// Piecewise-linear Action-valued function of rational time; constant
// extrapolation outside the breakpoint span.
struct PLFunction {
    std::vector<std::pair<Rat, Action>> points; // strictly increasing times

    Action at(const Rat& t) const;
    static PLFunction constant(const Action& v);
    static PLFunction segment(const Rat& t0, const Action& v0, const Rat& t1, const Action& v1);
};

// Piecewise-linear rational-valued function (oscillation integrands).
struct PLRatFunction {
    std::vector<std::pair<Rat, Rat>> points;

    Rat at(const Rat& t) const;
    Rat integral(const Rat& t0, const Rat& t1) const; // exact
    static PLRatFunction constant(const Rat& v);
};

struct TimedEvent {
    Rat time;
    Event event;
};

// One-parameter family of filtered complexes: generator actions and window
// bounds drift piecewise linearly, the differential changes only at the
// listed simple bifurcations, each at its own rational time.
struct PWCScript {
    Rat t_lo = 0, t_hi = 1;
    FilteredComplex initial;
    std::map<std::string, PLFunction> trajectories; // by generator name
    std::optional<PLFunction> window_lo_traj, window_hi_traj; // absent = constant
    std::vector<TimedEvent> events;
};

std::vector<std::string> validate_script(const PWCScript& script);

struct Frame {
    Rat t;
    FilteredComplex complex;
    Barcode barcode;
};

// State at every event time (post-event) and requested sample time; the
// complex between events changes only by action drift.
std::vector<Frame> evolve(const PWCScript& script, const std::vector<Rat>& samples = {});

// Oscillation profile: integrand (max H_t - min H_t) >= 0 and its running
// integral l(t) from t_lo.
struct OscillationProfile {
    PLRatFunction integrand;

    Rat total(const Rat& t_lo, const Rat& t_hi) const { return integrand.integral(t_lo, t_hi); }
};

std::vector<std::string> validate_profile(const OscillationProfile& osc);

struct AdmissibilityVerdict {
    bool admissible = false;
    std::optional<Rat> first_violation; // exact when the crossing is rational
    bool violation_time_exact = false;  // otherwise a witness time with margin <= 0
    std::string message;
};

// Window width must stay strictly below l - l(t) (and strictly positive)
// for all t.
AdmissibilityVerdict check_window_admissibility(const PWCScript& script,
                                                const OscillationProfile& osc, const Rat& l);

struct SpeedLawVerdict {
    bool ok = false;
    std::vector<std::string> violations;
};

// Pairwise drift rate of action differences is bounded by the oscillation
// rate; generators named in `pure` additionally satisfy the single-chord
// bound pointwise and over the whole range.
SpeedLawVerdict check_speed_law(const PWCScript& script, const OscillationProfile& osc,
                                const std::vector<std::string>& pure = {});

// Hamiltonian bound data for the alternate norms: pointwise max and min of
// H_t plus the sup of the conformal factor magnitude.
struct NormProfiles {
    PLRatFunction max_h, min_h;
    Rat conformal_max_abs = 0;
};

OscillationProfile osc_profile(const NormProfiles& n); // integrand max - min
OscillationProfile l1_profile(const NormProfiles& n);  // integrand max

// l2(t) = l(t) + max|g|: same integrand, level reduced by the offset.
AdmissibilityVerdict check_window_admissibility_l2(const PWCScript& script, const NormProfiles& n,
                                                   const Rat& l);

// Gates for the domination l(t) <= l1(t), l2(t): min H <= 0 <= max H
// pointwise and a nonnegative conformal offset.
std::vector<std::string> check_norm_domination(const NormProfiles& n);

// One grid step of a PWC assembly: a simple equivalence, or a birth or
// death of the named pair at action level bd_a.
struct GridStep {
    enum Kind { Simple, Birth, Death } kind = Simple;
    EquivalenceCertificate cert;
    Rat delta;
    Action bd_a;              // birth/death window base
    std::string bd_x, bd_y;   // the pair (dx = k y)
};

// Builds a PWC script from complexes at uniform grid times over [0,1] with
// per-step certificates.  Each step is gated through the simple-equivalence
// or birth/death checker; the emitted script's barcodes at grid times are
// verified against the grid complexes.
PWCScript assemble_pwc_from_equivalences(const std::vector<FilteredComplex>& grid,
                                         const std::vector<GridStep>& steps);

} // namespace rfcone
