#include "rfcone/bounds.hpp"

#include <algorithm>

namespace rfcone {

std::pair<Rat, Rat> exp_enclosure(const Rat& x, const Rat& tolerance) {
    if (x < 0) {
        auto [lo, hi] = exp_enclosure(-x, tolerance);
        return {1 / hi, 1 / lo};
    }
    if (x == 0) return {Rat(1), Rat(1)};
    if (tolerance <= 0) throw domain_error("enclosure tolerance must be positive");
    // partial sums with remainder bound x^N/N! * 1/(1 - x/N) for N > x
    Rat sum = 1, term = 1;
    int n = 0;
    for (;;) {
        ++n;
        term = term * x / n;
        sum += term;
        if (Rat(n) > x) {
            Rat tail = term * x / (n + 1) / (1 - x / (n + 1));
            if (tail < tolerance && Rat(n + 1) > x) return {sum, sum + tail};
        }
        if (n > 10000) throw domain_error("exponential enclosure did not converge");
    }
}

std::vector<std::string> validate_spectrum(const ChordSpectrum& s) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < s.lengths.size(); ++i) {
        if (s.lengths[i] <= 0) v.push_back("chord lengths must be positive");
        if (i && !(s.lengths[i - 1] < s.lengths[i]))
            v.push_back("chord lengths must be strictly increasing");
    }
    if (s.hbar < s.level) v.push_back("action level must satisfy l <= hbar");
    if (s.level.finite() && action_sign(s.level.value) <= 0)
        v.push_back("action level must be positive");
    return v;
}

BoundResult main_theorem_bound(const std::vector<long long>& betti, std::size_t k, const Rat& osc,
                               const ChordSpectrum& spectrum) {
    auto bad = validate_spectrum(spectrum);
    if (!bad.empty()) throw domain_error("invalid spectrum: " + bad.front());
    if (k < 1 || k > spectrum.lengths.size())
        throw domain_error("k must index into the chord spectrum");

    BoundResult r;
    ExtAction osc_e{Action(osc)};
    if (!(osc_e < spectrum.level)) {
        r.gate = "oscillation is not below the action level l";
        return r;
    }
    if (!(osc < spectrum.lengths[k - 1])) {
        r.gate = "oscillation is not below ell(c_k)";
        return r;
    }
    r.admissible = true;
    r.bound = -2 * (static_cast<long long>(k) - 1);
    for (auto b : betti) r.bound += b;
    return r;
}

Rat scf_energy_constant(const std::vector<Rat>& critical_values, const Rat& eps) {
    if (critical_values.empty()) throw domain_error("need at least one critical value");
    if (eps <= 0) throw domain_error("eps must be positive");
    for (std::size_t i = 1; i < critical_values.size(); ++i) {
        if (critical_values[i] == critical_values[i - 1])
            throw domain_error("critical values must correspond to distinct critical points");
        if (critical_values[i] < critical_values[i - 1])
            throw domain_error("critical values must be sorted increasingly");
    }
    Rat m1 = critical_values.front(), mq = critical_values.back();
    if (!(mq > 0 && 2 * m1 > mq))
        throw domain_error("normalization 2 min(f) > max(f) > 0 fails");
    Rat c = eps * eps * (2 * m1 - mq);
    for (std::size_t i = 1; i < critical_values.size(); ++i)
        c = std::min(c, Rat(eps * eps * (critical_values[i] - critical_values[i - 1])));
    if (!(c > 0)) throw domain_error("energy constant is not positive");
    return c;
}

GrowthVerdict action_growth_check(const std::vector<std::pair<Rat, Rat>>& pairs, const Rat& delta) {
    if (delta < 0) throw domain_error("delta must be nonnegative");
    GrowthVerdict v;
    Rat tol(1, 1000000);
    for (const auto& [in, out] : pairs) {
        if (in <= 0) {
            v.violations.push_back("input action must be positive");
            continue;
        }
        bool decided = false;
        for (int refine = 0; refine < 64 && !decided; ++refine) {
            auto [lo, hi] = exp_enclosure(2 * delta, tol);
            if (out < lo * in) decided = true; // certainly below e^{2 delta} * in
            else if (out >= hi * in) {
                v.violations.push_back("action growth from " + format_rational(in) + " to " +
                                       format_rational(out) + " exceeds the e^{2 delta} bound");
                decided = true;
            } else {
                tol /= 1024; // sharpen: out/in lies inside the enclosure
            }
        }
        if (!decided)
            throw domain_error("action growth comparison undecidable (value equals e^{2 delta})");
    }
    v.ok = v.violations.empty();
    return v;
}

TraceLengths trace_lengths(const ConformalProfile& profile) {
    if (profile.eps <= 0) throw domain_error("eps must be positive");
    if (profile.f_max < profile.f_min) throw domain_error("conformal bounds out of order");
    Rat expo = 1 + profile.eps;
    Rat tol(1, Int(1000000000));
    auto [elo, ehi] = exp_enclosure(expo, tol);

    auto make = [&](const Rat& coeff) {
        ExpValue v;
        v.coeff = coeff;
        v.exponent = expo;
        if (coeff >= 0) {
            v.enclosure_lo = coeff * elo;
            v.enclosure_hi = coeff * ehi;
        } else {
            v.enclosure_lo = coeff * ehi;
            v.enclosure_hi = coeff * elo;
        }
        return v;
    };

    TraceLengths t;
    t.len01 = make(std::max(Rat(0), Rat(-profile.f_min)));
    t.len10 = make(std::max(Rat(0), profile.f_max));
    t.c0 = make(profile.f_max - profile.f_min);
    return t;
}

long long adversarial_min_survivors(const AdversarySetup& setup) {
    const std::size_t q = setup.chord_actions.size();
    if (q > 4) throw domain_error("adversary model supports at most 4 chords");
    if (setup.steps < 1 || setup.steps > 8) throw domain_error("grid steps must lie in 1..8");
    if (setup.osc <= 0) throw domain_error("oscillation budget must be positive");
    for (std::size_t i = 0; i < q; ++i) {
        if (setup.chord_actions[i] <= 0) throw domain_error("chord actions must be positive");
        if (i && setup.chord_actions[i] <= setup.chord_actions[i - 1])
            throw domain_error("chord actions must be strictly increasing");
    }
    const int n = setup.steps;

    // earliest grid slot (1-based) at which chord i can reach the cluster:
    // it needs drift a_i at rate osc per unit time on a grid of n slots
    std::vector<int> arrival(q, n + 1);
    for (std::size_t i = 0; i < q; ++i) {
        for (int s = 1; s <= n; ++s) {
            if (setup.chord_actions[i] <= setup.osc * Rat(s, n)) {
                arrival[i] = s;
                break;
            }
        }
    }

    // enumerate every schedule: each slot is idle or a death caused by one
    // chord; a chord kills at most two bars and only after arriving
    std::size_t max_kills = 0;
    std::vector<std::size_t> slot(n, 0); // 0 = idle, i+1 = death by chord i
    for (;;) {
        std::vector<int> kills(q, 0);
        bool legal = true;
        std::size_t total = 0;
        for (int s = 0; s < n && legal; ++s) {
            if (slot[s] == 0) continue;
            std::size_t i = slot[s] - 1;
            if (s + 1 < arrival[i] || ++kills[i] > 2) legal = false;
            else ++total;
        }
        if (legal) max_kills = std::max(max_kills, std::min(total, setup.morse_bars));
        // next schedule
        int pos = 0;
        while (pos < n && slot[pos] == q) slot[pos++] = 0;
        if (pos == n) break;
        ++slot[pos];
    }
    return static_cast<long long>(setup.morse_bars) - static_cast<long long>(max_kills);
}

} // namespace rfcone
