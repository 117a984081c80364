#pragma once

// Test-only helpers: deterministic RNG, random instance generators, and the
// rank-characterization barcode oracle kept independent of the reduction
// path in the library.

#include <cstdint>
#include <functional>
#include <set>

#include "rfcone/barcode.hpp"
#include "rfcone/transform.hpp"

namespace rfcone::testutil {

// splitmix64: identical streams on every platform
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    std::uint64_t uniform(std::uint64_t n) { return n ? next() % n : 0; }
    bool chance(std::uint64_t num, std::uint64_t den) { return uniform(den) < num; }

private:
    std::uint64_t state_;
};

// Random filtered complex with d^2 = 0: start from a canonical pairing
// differential and conjugate by random filtered automorphisms.
inline FilteredComplex random_complex(Rng& rng, std::size_t max_dim, std::uint32_t p,
                                      int grading_modulus = 0) {
    std::size_t n = 1 + rng.uniform(max_dim);
    FilteredComplex c;
    c.field = GroundField(p);
    c.grading_modulus = grading_modulus;

    // distinct rational actions
    std::set<Rat> used;
    for (std::size_t i = 0; i < n; ++i) {
        Rat a;
        do {
            a = Rat(1 + rng.uniform(200), 1 + rng.uniform(8));
        } while (used.count(a));
        used.insert(a);
        BasisElement b;
        b.name = "e" + std::to_string(i);
        b.degree = static_cast<int>(rng.uniform(5)) - 2;
        b.action = Action(a);
        c.basis.push_back(b);
    }
    c.differential = FpMatrix(n, n);

    // canonical pairing: greedily match (lower action, degree d) with
    // (higher action, degree d+1)
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ActionKeyLess{}(c.basis[a].action, c.basis[b].action);
    });
    std::vector<bool> taken(n, false);
    for (std::size_t bi = 0; bi < n; ++bi) {
        if (taken[order[bi]] || !rng.chance(2, 3)) continue;
        for (std::size_t xi = bi + 1; xi < n; ++xi) {
            std::size_t birth = order[bi], death = order[xi];
            if (taken[death] || taken[birth]) continue;
            if (c.degree_mod(c.basis[death].degree - 1) != c.degree_mod(c.basis[birth].degree))
                continue;
            std::uint32_t unit = 1 + static_cast<std::uint32_t>(rng.uniform(p - 1));
            c.differential.at(birth, death) = unit;
            taken[birth] = taken[death] = true;
            break;
        }
    }

    // conjugate by random filtered elementary transvections e_t += k e_a
    // with ell(a) < ell(t) and equal degree
    std::size_t ops = rng.uniform(2 * n + 1);
    const auto& ff = c.field;
    for (std::size_t o = 0; o < ops; ++o) {
        std::size_t t = rng.uniform(n), a = rng.uniform(n);
        if (t == a) continue;
        if (!(c.basis[a].action < c.basis[t].action)) continue;
        if (c.degree_mod(c.basis[a].degree) != c.degree_mod(c.basis[t].degree)) continue;
        std::uint32_t k = 1 + static_cast<std::uint32_t>(rng.uniform(p - 1));
        for (std::size_t i = 0; i < n; ++i)
            c.differential.at(i, t) = ff.add(c.differential.at(i, t), ff.mul(k, c.differential.at(i, a)));
        for (std::size_t j = 0; j < n; ++j)
            c.differential.at(a, j) = ff.sub(c.differential.at(a, j), ff.mul(k, c.differential.at(t, j)));
    }
    require_valid(c);
    return c;
}

// ---- rank-characterization oracle ------------------------------------------
//
// Barcode from the start/persist dimension counts: bars starting at s are
// counted by dim coker(H(C^{<s+e}) -> H under inclusion), and their
// persistence through level t by rank differences of cycle/boundary spaces.
// Everything reduces to ranks of [cycles below a cut | boundaries below a
// cut], computed independently of the reduction pairing.

inline Barcode oracle_barcode(const FilteredComplex& c) {
    const auto& ff = c.field;
    const std::size_t n = c.dim();

    std::vector<Action> cuts; // distinct action values, ascending
    {
        std::vector<Action> vals;
        for (const auto& b : c.basis) vals.push_back(b.action);
        std::sort(vals.begin(), vals.end(), ActionKeyLess{});
        for (const auto& v : vals)
            if (cuts.empty() || !(cuts.back() == v)) cuts.push_back(v);
    }

    std::set<int> degrees;
    for (const auto& b : c.basis) degrees.insert(c.degree_mod(b.degree));

    // columns with action < cut (+eps means inclusive at the cut)
    auto cols_below = [&](const Action& cut, bool inclusive, int deg) {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < n; ++i) {
            if (c.degree_mod(c.basis[i].degree) != c.degree_mod(deg)) continue;
            if (c.basis[i].action < cut || (inclusive && c.basis[i].action == cut))
                idx.push_back(i);
        }
        return idx;
    };

    // basis of cycles in degree deg supported below the cut: kernel of the
    // boundary restricted to those columns, embedded in R^n
    auto cycle_basis = [&](const Action& cut, bool inclusive, int deg) {
        auto idx = cols_below(cut, inclusive, deg);
        FpMatrix sub(n, idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k)
            for (std::size_t i = 0; i < n; ++i) sub.at(i, k) = c.differential.at(i, idx[k]);
        FpMatrix ker = fp_kernel(ff, sub);
        FpMatrix emb(n, ker.cols);
        for (std::size_t k = 0; k < ker.cols; ++k)
            for (std::size_t r = 0; r < idx.size(); ++r) emb.at(idx[r], k) = ker.at(r, k);
        return emb;
    };

    // boundaries into degree deg from columns below the cut
    auto boundary_cols = [&](const Action& cut, bool inclusive, int deg) {
        auto idx = cols_below(cut, inclusive, deg + 1);
        FpMatrix m(n, idx.size());
        for (std::size_t k = 0; k < idx.size(); ++k)
            for (std::size_t i = 0; i < n; ++i) m.at(i, k) = c.differential.at(i, idx[k]);
        return m;
    };

    // rho(s_incl, l_incl) = rank[ Z_d(<= s) | B_d(<= l) ]
    auto rho = [&](int deg, const Action& s, bool s_incl, const Action& l, bool l_incl) {
        return fp_rank(ff, fp_hcat(cycle_basis(s, s_incl, deg), boundary_cols(l, l_incl, deg)));
    };

    Barcode bc;
    bc.window_lo = c.window_lo;
    bc.window_hi = c.window_hi;
    for (int deg : degrees) {
        for (std::size_t si = 0; si < cuts.size(); ++si) {
            const Action& s = cuts[si];
            // bars born at s that persist past level l (inclusive cuts stand
            // in for the paper's s + eps with eps below the minimal gap)
            auto persist = [&](std::size_t li) {
                return rho(deg, s, true, cuts[li], true) - rho(deg, s, false, cuts[li], true);
            };
            std::size_t born = persist(si);
            if (!born) continue;
            std::size_t alive = born;
            for (std::size_t li = si + 1; li < cuts.size() && alive; ++li) {
                std::size_t now = persist(li);
                for (std::size_t k = now; k < alive; ++k)
                    bc.bars.push_back(Bar{s, ExtAction(cuts[li]), deg});
                alive = now;
            }
            for (std::size_t k = 0; k < alive; ++k)
                bc.bars.push_back(Bar{s, ExtAction::pos_inf(), deg});
        }
    }
    bc.canonicalize();
    return bc;
}

// Random DGA built from stabilizations and elementary moves, so it is
// guaranteed stable-tame trivial; useful for transform tests.
inline FilteredDGA random_sti_dga(Rng& rng, std::uint32_t p, std::size_t pairs,
                                  std::size_t tame_moves) {
    FilteredDGA dga{GroundField(p), 0, ExtAction::pos_inf()};
    STI sti;
    std::set<Rat> used;
    auto fresh_action = [&]() {
        Rat a;
        do {
            a = Rat(1 + rng.uniform(400), 1 + rng.uniform(4));
        } while (used.count(a));
        used.insert(a);
        return a;
    };
    for (std::size_t i = 0; i < pairs; ++i) {
        Generator x, y;
        x.name = "x" + std::to_string(i);
        y.name = "y" + std::to_string(i);
        // keep |y| away from 0 so stabilization preserves augmentation counts
        const int degree_choices[4] = {0, 1, 2, -2};
        x.degree = degree_choices[rng.uniform(4)];
        y.degree = x.degree + 1;
        Rat a = fresh_action(), b;
        do {
            b = fresh_action();
        } while (b < a);
        x.action = Action(a);
        y.action = Action(b);
        dga = apply_tame(dga, MoveStabilize{x, y});
    }
    for (std::size_t m = 0; m < tame_moves && dga.size() > 1; ++m) {
        // random filtered elementary move: target gets a lower-action word
        // of the same degree
        std::uint32_t t = static_cast<std::uint32_t>(rng.uniform(dga.size()));
        const Generator& tg = dga.generator(t);
        // candidate single letters and two-letter words
        std::vector<NamedWord> candidates;
        for (std::uint32_t a = 0; a < dga.size(); ++a) {
            if (a == t) continue;
            const Generator& ga = dga.generator(a);
            if (ga.degree == tg.degree && ga.action < tg.action)
                candidates.push_back({ga.name});
            for (std::uint32_t b = 0; b < dga.size(); ++b) {
                if (b == t || a == t) continue;
                const Generator& gb = dga.generator(b);
                if (ga.degree + gb.degree == tg.degree &&
                    ga.action + gb.action < tg.action)
                    candidates.push_back({ga.name, gb.name});
            }
        }
        if (candidates.empty()) continue;
        MoveElementary mv;
        mv.target = tg.name;
        mv.unit = 1 + static_cast<std::uint32_t>(rng.uniform(p - 1));
        if (rng.chance(3, 4)) {
            const NamedWord& w = candidates[rng.uniform(candidates.size())];
            mv.word_sum[w] = 1 + static_cast<std::uint32_t>(rng.uniform(p - 1));
        }
        dga = apply_tame(dga, mv);
    }
    return dga;
}

inline std::map<int, std::size_t> linearized_homology(const FilteredDGA& dga,
                                                      const Augmentation& eps) {
    return homology_dims(linearize(dga, eps));
}

} // namespace rfcone::testutil
