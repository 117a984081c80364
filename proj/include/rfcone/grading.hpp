#pragma once

#include "rfcone/pwc.hpp"
#include "rfcone/rabinowitz.hpp"

namespace rfcone {

// Index of a pseudoholomorphic plane asymptotic to a closed orbit:
// (n+1) - 3 + mu_cz + 2 c1rel, with the Morse-Bott shift
// morse_index - bott_dim applied when perturbing.
struct OrbitIndexInput {
    int n = 1;         // ambient dimension 2n+1
    int mu_cz = 0;     // Conley-Zehnder index of the perturbed return path
    int c1rel = 0;     // relative first Chern number
    int bott_dim = 0;
    int morse_index = 0;
    bool perturbed = false; // apply the Morse-Bott shift
};

int plane_index(const OrbitIndexInput& in);

// Index of a half-plane asymptotic to a chord: (cz - 1) + maslov, with the
// same Morse-Bott shift convention.
struct ChordIndexInput {
    int cz = 0;
    int maslov = 0;
    int bott_dim = 0;
    int morse_index = 0;
    bool perturbed = false;
};

int halfplane_index(const ChordIndexInput& in);

// Mixed chords c^k_j of the standard Legendrian projective space pair:
// degree j + k(n+1) - 1, signed action (pi (j/(n+1) + k) - epsilon) / 2,
// direction 0->1 for k >= 0 and 1->0 for k < 0.
struct RPnChordLabel {
    int n = 1;
    int j = 1; // in 1..n+1
    long long k = 0;
    Rat epsilon; // 0 < epsilon < pi/(n+1); defaulted when unset (<= 0)
};

struct RPnChord {
    int degree = 0;
    Action action;
    Flavor direction = Flavor::Mixed01;
    std::string name;
};

Rat rpn_default_epsilon(int n);

RPnChord rpn_mixed_chord(const RPnChordLabel& label);

// All chords with signed action inside [lo, hi), assembled through
// build_rfc: one generator per integer degree, zero differential.
RFCComplex rpn_generate_rfc(int n, const ExtAction& lo, const ExtAction& hi,
                            const Rat& epsilon = 0);

// The positive-rotation isotopy script: every chord action moves up by
// pi/(2(n+1)) over t in [0,1], carrying c^k_j to c^k_{j+1} (or c^{k+1}_1),
// with the window co-moving and no births or deaths.
PWCScript rpn_action_shift_script(int n, const ExtAction& lo, const ExtAction& hi,
                                  const Rat& epsilon = 0);

} // namespace rfcone
