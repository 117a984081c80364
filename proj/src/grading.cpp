#include "rfcone/grading.hpp"

namespace rfcone {

namespace {

void check_morse_bott(int morse_index, int bott_dim) {
    if (bott_dim < 0 || morse_index < 0 || morse_index > bott_dim)
        throw domain_error("Morse index must lie in [0, bott_dim]");
}

} // namespace

int plane_index(const OrbitIndexInput& in) {
    if (in.n < 1) throw domain_error("ambient parameter n must be >= 1");
    check_morse_bott(in.morse_index, in.bott_dim);
    int idx = (in.n + 1) - 3 + in.mu_cz + 2 * in.c1rel;
    if (in.perturbed) idx += in.morse_index - in.bott_dim;
    return idx;
}

int halfplane_index(const ChordIndexInput& in) {
    check_morse_bott(in.morse_index, in.bott_dim);
    int idx = (in.cz - 1) + in.maslov;
    if (in.perturbed) idx += in.morse_index - in.bott_dim;
    return idx;
}

Rat rpn_default_epsilon(int n) { return Rat(3, 200 * (n + 1)); }

RPnChord rpn_mixed_chord(const RPnChordLabel& label) {
    if (label.n < 1) throw domain_error("n must be >= 1");
    if (label.j < 1 || label.j > label.n + 1) throw domain_error("j must lie in 1..n+1");
    Rat eps = label.epsilon;
    if (eps <= 0) eps = rpn_default_epsilon(label.n);
    if (!(Action(eps) < Action(Rat(1, label.n + 1), 0)))
        throw domain_error("epsilon must be below pi/(n+1)");

    RPnChord c;
    c.degree = label.j + static_cast<int>(label.k) * (label.n + 1) - 1;
    c.action = Action(Rat(label.j, 2 * (label.n + 1)) + Rat(label.k, 2), -eps / 2);
    c.direction = label.k >= 0 ? Flavor::Mixed01 : Flavor::Mixed10;
    c.name = "c" + std::to_string(label.k) + "_" + std::to_string(label.j);
    return c;
}

RFCComplex rpn_generate_rfc(int n, const ExtAction& lo, const ExtAction& hi, const Rat& epsilon) {
    if (n < 1) throw domain_error("n must be >= 1");
    if (!(lo < hi) && !(lo == hi)) throw domain_error("window bounds out of order");
    Rat eps = epsilon;
    if (eps <= 0) eps = rpn_default_epsilon(n);

    FilteredDGA dga(GroundField(2), 0, ExtAction::pos_inf());
    auto in_window = [&](const Action& a) { return !(ExtAction(a) < lo) && ExtAction(a) < hi; };

    std::vector<RPnChord> chords;
    if (lo.finite() || hi.finite()) {
        // walk k upward and downward until the whole block leaves the window
        for (long long k = 0;; ++k) {
            bool any = false;
            for (int j = 1; j <= n + 1; ++j) {
                RPnChord c = rpn_mixed_chord({n, j, k, eps});
                if (in_window(c.action)) {
                    chords.push_back(c);
                    any = true;
                }
            }
            if (!any && hi.finite() &&
                !(ExtAction(rpn_mixed_chord({n, 1, k, eps}).action) < hi))
                break;
            if (!any && !hi.finite())
                throw domain_error("infinite window holds infinitely many chords");
            if (k > 1000000) throw domain_error("window too wide");
        }
        for (long long k = -1;; --k) {
            bool any = false;
            for (int j = 1; j <= n + 1; ++j) {
                RPnChord c = rpn_mixed_chord({n, j, k, eps});
                if (in_window(c.action)) {
                    chords.push_back(c);
                    any = true;
                }
            }
            if (!any && lo.finite() &&
                ExtAction(rpn_mixed_chord({n, n + 1, k, eps}).action) < lo)
                break;
            if (!any && !lo.finite())
                throw domain_error("infinite window holds infinitely many chords");
            if (k < -1000000) throw domain_error("window too wide");
        }
    } else {
        throw domain_error("infinite window holds infinitely many chords");
    }

    for (const auto& c : chords) {
        Generator g;
        g.name = c.name;
        g.flavor = c.direction;
        // the DGA stores the chord length; the cone restores the sign
        g.action = c.direction == Flavor::Mixed10 ? -c.action : c.action;
        // the cone grades the 10 side as n - degree - 2
        g.degree = c.direction == Flavor::Mixed10 ? n - 2 - c.degree : c.degree;
        dga.add_generator(g);
    }

    LinkDGA link(std::move(dga));
    return build_rfc(link, Augmentation{}, BananaCounts{}, lo, hi, n, 0);
}

PWCScript rpn_action_shift_script(int n, const ExtAction& lo, const ExtAction& hi,
                                  const Rat& epsilon) {
    RFCComplex rfc = rpn_generate_rfc(n, lo, hi, epsilon);
    const Action shift(Rat(1, 2 * (n + 1)), 0); // pi / (2(n+1))

    PWCScript script;
    script.t_lo = 0;
    script.t_hi = 1;
    script.initial = rfc.complex;
    for (const auto& b : rfc.complex.basis)
        script.trajectories[b.name] = PLFunction::segment(0, b.action, 1, b.action + shift);
    if (lo.finite())
        script.window_lo_traj = PLFunction::segment(0, lo.value, 1, lo.value + shift);
    if (hi.finite())
        script.window_hi_traj = PLFunction::segment(0, hi.value, 1, hi.value + shift);
    return script;
}

} // namespace rfcone
