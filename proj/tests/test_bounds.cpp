#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle_util.hpp"
#include "rfcone/bounds.hpp"

using namespace rfcone;
using testutil::Rng;

TEST_CASE("exponential enclosures are certified") {
    auto [lo, hi] = exp_enclosure(Rat(1), Rat(1, 1000000));
    CHECK(lo <= hi);
    CHECK(hi - lo < Rat(1, 1000000));
    // e in (2.718281, 2.718282)
    CHECK(lo > Rat(2718281, 1000000));
    CHECK(hi < Rat(2718282, 1000000));

    auto [l0, h0] = exp_enclosure(Rat(0), Rat(1, 10));
    CHECK(l0 == 1);
    CHECK(h0 == 1);

    auto [ln, hn] = exp_enclosure(Rat(-1), Rat(1, 100000));
    CHECK(ln < Rat(367880, 1000000));
    CHECK(hn > Rat(367879, 1000000));
}

TEST_CASE("main theorem bound: spec examples") {
    ChordSpectrum circle;
    circle.lengths = {Rat(1, 2), Rat(1)};
    // betti of the circle, k = 1, osc below the first length
    BoundResult r = main_theorem_bound({1, 1}, 1, Rat(1, 10), circle);
    CHECK(r.admissible);
    CHECK(r.bound == 2);

    // betti of projective n-space over F_2 sums to n + 1
    for (int n = 1; n <= 5; ++n) {
        std::vector<long long> betti(static_cast<std::size_t>(n) + 1, 1);
        BoundResult rn = main_theorem_bound(betti, 1, Rat(1, 10), circle);
        CHECK(rn.admissible);
        CHECK(rn.bound == n + 1);
    }

    // gate: osc >= ell(c_k)
    BoundResult bad = main_theorem_bound({1, 1}, 1, Rat(1), circle);
    CHECK(!bad.admissible);
    CHECK(bad.gate.find("ell(c_k)") != std::string::npos);

    // gate: osc >= l
    ChordSpectrum low = circle;
    low.level = ExtAction(Action(Rat(1, 20)));
    BoundResult bad2 = main_theorem_bound({1, 1}, 1, Rat(1, 10), low);
    CHECK(!bad2.admissible);
    CHECK(bad2.gate.find("action level") != std::string::npos);
}

TEST_CASE("main theorem bound is monotone in k") {
    ChordSpectrum s;
    s.lengths = {Rat(1), Rat(2), Rat(3), Rat(4)};
    long long prev = 1 << 20;
    for (std::size_t k = 1; k <= 4; ++k) {
        BoundResult r = main_theorem_bound({1, 2, 1}, k, Rat(1, 2), s);
        REQUIRE(r.admissible);
        CHECK(r.bound <= prev);
        prev = r.bound;
    }
}

TEST_CASE("main theorem bound ignores the spectrum beyond the gate") {
    ChordSpectrum a, b;
    a.lengths = {Rat(1), Rat(2)};
    b.lengths = {Rat(1), Rat(50), Rat(60)};
    BoundResult ra = main_theorem_bound({1, 1}, 1, Rat(1, 2), a);
    BoundResult rb = main_theorem_bound({1, 1}, 1, Rat(1, 2), b);
    REQUIRE(ra.admissible);
    REQUIRE(rb.admissible);
    CHECK(ra.bound == rb.bound);
}

TEST_CASE("energy constant: spec examples") {
    CHECK(scf_energy_constant({Rat(3, 5), Rat(4, 5), Rat(1)}, Rat(1, 10)) == Rat(1, 500));
    // normalization 2 m_1 > m_q > 0
    CHECK_THROWS_AS(scf_energy_constant({Rat(1, 5), Rat(1)}, Rat(1, 10)), domain_error);
    // distinct critical points
    CHECK_THROWS_AS(scf_energy_constant({Rat(4, 5), Rat(4, 5), Rat(1)}, Rat(1, 10)), domain_error);
    // single critical value: C = eps^2 m_1
    CHECK(scf_energy_constant({Rat(2, 3)}, Rat(1, 2)) == Rat(1, 6));
}

TEST_CASE("action growth check: spec examples") {
    // delta = 0: strict decrease required
    GrowthVerdict cyl = action_growth_check({{Rat(1), Rat(9, 10)}}, Rat(0));
    CHECK(cyl.ok);
    GrowthVerdict cyl_bad = action_growth_check({{Rat(1), Rat(1)}}, Rat(0));
    CHECK(!cyl_bad.ok);

    // out = 2 with e^{2 delta} <= 3/2: violation
    // 2 delta = ln(3/2) - margin; choose delta = 1/5 so e^{2/5} < 3/2
    GrowthVerdict v = action_growth_check({{Rat(1), Rat(2)}}, Rat(1, 5));
    CHECK(!v.ok);

    // out = 5/4 with e^{2 delta} >= 4/3: pass; 2 delta = 2/5, e^{2/5} > 4/3
    GrowthVerdict ok = action_growth_check({{Rat(1), Rat(5, 4)}}, Rat(1, 5));
    CHECK(ok.ok);
}

TEST_CASE("trace lengths: spec examples and additivity") {
    // f == 0: strict contactomorphism
    TraceLengths zero = trace_lengths({Rat(0), Rat(0), Rat(1, 100)});
    CHECK(zero.len01.coeff == 0);
    CHECK(zero.len10.coeff == 0);
    CHECK(zero.c0.coeff == 0);

    // f_min = -1/10, f_max = 1/5, eps = 1/100
    TraceLengths t = trace_lengths({Rat(-1, 10), Rat(1, 5), Rat(1, 100)});
    CHECK(t.len01.coeff == Rat(1, 10));
    CHECK(t.len01.exponent == Rat(101, 100));
    CHECK(t.len10.coeff == Rat(1, 5));
    CHECK(t.c0.coeff == Rat(3, 10));
    CHECK(t.c0.exponent == Rat(101, 100));
    CHECK(t.len01.enclosure_lo <= t.len01.enclosure_hi);
    // numeric sanity: 0.1 * e^{1.01} is about 0.2745
    CHECK(t.len01.enclosure_lo > Rat(27, 100));
    CHECK(t.len01.enclosure_hi < Rat(28, 100));

    // f_min = 0: the 01 trace is trivial
    TraceLengths up = trace_lengths({Rat(0), Rat(1, 5), Rat(1, 100)});
    CHECK(up.len01.coeff == 0);

    // additivity c0 = len01 + len10 whenever f_min <= 0 <= f_max
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        Rat fmin = -Rat(rng.uniform(100), 100);
        Rat fmax = Rat(rng.uniform(100), 100);
        TraceLengths tt = trace_lengths({fmin, fmax, Rat(1 + rng.uniform(50), 100)});
        CHECK(tt.c0.coeff == tt.len01.coeff + tt.len10.coeff);
        CHECK(tt.c0.exponent == tt.len01.exponent);
    }
    // clamping when the profile has one sign
    TraceLengths pos = trace_lengths({Rat(1, 10), Rat(1, 5), Rat(1, 100)});
    CHECK(pos.len01.coeff == 0);
    CHECK(pos.c0.coeff == Rat(1, 10));
}

TEST_CASE("adversary never beats the bound") {
    // chords at 1/2 and 1 with osc below both: nothing reachable
    AdversarySetup s;
    s.chord_actions = {Rat(1, 2), Rat(1)};
    s.morse_bars = 2;
    s.osc = Rat(1, 10);
    s.steps = 4;
    CHECK(adversarial_min_survivors(s) == 2);

    // osc above the first chord: with enough slots it kills two bars
    s.osc = Rat(3, 5);
    s.morse_bars = 3;
    s.steps = 8; // arrival at slot 7 leaves two death slots
    CHECK(adversarial_min_survivors(s) == 1);

    // scheduling limits the kills when the grid is tight
    AdversarySetup tight;
    tight.chord_actions = {Rat(9, 10)};
    tight.morse_bars = 2;
    tight.osc = Rat(1);
    tight.steps = 1; // one slot: only one death fits
    CHECK(adversarial_min_survivors(tight) == 1);
}

TEST_CASE("spectrum validation") {
    ChordSpectrum s;
    s.lengths = {Rat(2), Rat(1)};
    CHECK(!validate_spectrum(s).empty());
    s.lengths = {Rat(1), Rat(2)};
    CHECK(validate_spectrum(s).empty());
    s.hbar = ExtAction(Action(Rat(1)));
    s.level = ExtAction(Action(Rat(2)));
    CHECK(!validate_spectrum(s).empty()); // l > hbar
}
