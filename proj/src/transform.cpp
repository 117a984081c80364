#include "rfcone/transform.hpp"

#include <algorithm>
#include <sstream>

namespace rfcone {

std::uint32_t Augmentation::value(const std::string& name) const {
    auto it = values.find(name);
    if (it == values.end()) throw domain_error("augmentation undefined on generator '" + name + "'");
    return it->second;
}

std::uint32_t Augmentation::evaluate(const FilteredDGA& dga, const FreeElement& e) const {
    const auto& ff = dga.field();
    std::uint32_t total = 0;
    for (const auto& [w, c] : e.terms()) {
        std::uint32_t prod = c;
        for (auto letter : w) prod = ff.mul(prod, value(dga.generator(letter).name));
        total = ff.add(total, prod);
    }
    return total;
}

std::vector<std::string> validate_augmentation(const FilteredDGA& dga, const Augmentation& eps) {
    std::vector<std::string> v;
    const auto& ff = dga.field();
    for (std::uint32_t i = 0; i < dga.size(); ++i) {
        const auto& g = dga.generator(i);
        if (!eps.defined(g.name)) {
            v.push_back("augmentation undefined on generator '" + g.name + "'");
            continue;
        }
        std::uint32_t val = eps.value(g.name) % ff.p();
        if (val != 0 && dga.degree_mod(g.degree) != 0)
            v.push_back("augmentation nonzero on generator '" + g.name + "' of nonzero degree");
    }
    if (!v.empty()) return v;
    for (std::uint32_t i = 0; i < dga.size(); ++i)
        if (eps.evaluate(dga, dga.differential(i)) != 0)
            v.push_back("eps(d('" + dga.generator(i).name + "')) != 0");
    return v;
}

std::vector<Augmentation> find_augmentations(const FilteredDGA& dga, std::uint64_t max_candidates) {
    const auto& ff = dga.field();
    std::vector<std::uint32_t> deg0;
    for (std::uint32_t i = 0; i < dga.size(); ++i)
        if (dga.degree_mod(dga.generator(i).degree) == 0) deg0.push_back(i);

    // candidate count p^(deg0 count), guarded against overflow
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < deg0.size(); ++i) {
        if (count > max_candidates / ff.p() + 1) count = max_candidates + 1;
        else count *= ff.p();
        if (count > max_candidates)
            throw domain_error("augmentation search space exceeds the candidate cap");
    }

    std::vector<Augmentation> found;
    std::vector<std::uint32_t> digits(deg0.size(), 0);
    for (std::uint64_t n = 0; n < count; ++n) {
        Augmentation eps;
        for (std::uint32_t i = 0; i < dga.size(); ++i) eps.values[dga.generator(i).name] = 0;
        for (std::size_t k = 0; k < deg0.size(); ++k)
            eps.values[dga.generator(deg0[k]).name] = digits[k];
        bool ok = true;
        for (std::uint32_t i = 0; i < dga.size() && ok; ++i)
            ok = eps.evaluate(dga, dga.differential(i)) == 0;
        if (ok) found.push_back(std::move(eps));
        // increment base-p counter (last digit fastest)
        for (std::size_t k = deg0.size(); k-- > 0;) {
            if (++digits[k] < ff.p()) break;
            digits[k] = 0;
        }
    }
    return found;
}

namespace {

// Substitutes letter -> replacement elementwise (free-algebra algebra map).
FreeElement substitute(const GroundField& ff, const FreeElement& e, std::uint32_t letter,
                       const FreeElement& replacement) {
    FreeElement result;
    for (const auto& [w, c] : e.terms()) {
        FreeElement acc = FreeElement::unit(c);
        for (auto l : w) {
            const FreeElement& factor = (l == letter) ? replacement : FreeElement::single(Word{l});
            FreeElement next;
            for (const auto& [wa, ca] : acc.terms())
                for (const auto& [wb, cb] : factor.terms()) {
                    Word nw = wa;
                    nw.insert(nw.end(), wb.begin(), wb.end());
                    next.add_term(ff, nw, ff.mul(ca, cb));
                }
            acc = std::move(next);
        }
        for (const auto& [wr, cr] : acc.terms()) result.add_term(ff, wr, cr);
    }
    return result;
}

FreeElement scale(const GroundField& ff, std::uint32_t k, const FreeElement& e) {
    FreeElement r;
    for (const auto& [w, c] : e.terms()) r.add_term(ff, w, ff.mul(k, c));
    return r;
}

FreeElement add(const GroundField& ff, const FreeElement& a, const FreeElement& b) {
    FreeElement r = a;
    for (const auto& [w, c] : b.terms()) r.add_term(ff, w, c);
    return r;
}

} // namespace

FilteredDGA conjugate_by_augmentation(const FilteredDGA& dga, const Augmentation& eps) {
    auto bad = validate_augmentation(dga, eps);
    if (!bad.empty()) throw domain_error("invalid augmentation: " + bad.front());
    const auto& ff = dga.field();
    FilteredDGA out(dga.field(), dga.grading_modulus(), dga.action_level());
    for (std::uint32_t i = 0; i < dga.size(); ++i) out.add_generator(dga.generator(i));
    // Psi_eps(a) = a - eps(a); d^eps(g) = Psi_eps(d(g)), expanding each word
    // with letters replaced by (letter - eps(letter)).
    for (std::uint32_t i = 0; i < dga.size(); ++i) {
        FreeElement d = dga.differential(i);
        for (std::uint32_t l = 0; l < dga.size(); ++l) {
            std::uint32_t v = eps.value(dga.generator(l).name) % ff.p();
            if (!v) continue;
            FreeElement repl = FreeElement::single(Word{l});
            repl.add_term(ff, Word{}, ff.neg(v));
            d = substitute(ff, d, l, repl);
        }
        out.set_differential(i, std::move(d));
    }
    require_valid(out);
    return out;
}

FilteredComplex linearize(const FilteredDGA& dga, const Augmentation& eps) {
    FilteredDGA conj = conjugate_by_augmentation(dga, eps);
    FilteredComplex c;
    c.field = dga.field();
    c.grading_modulus = dga.grading_modulus();
    c.window_lo = ExtAction::neg_inf();
    c.window_hi = dga.action_level();
    for (std::uint32_t i = 0; i < dga.size(); ++i) {
        const auto& g = dga.generator(i);
        c.basis.push_back(BasisElement{g.name, g.degree, g.action});
    }
    c.differential = FpMatrix(dga.size(), dga.size());
    for (std::uint32_t j = 0; j < dga.size(); ++j)
        for (const auto& [w, coeff] : conj.differential(j).terms())
            if (w.size() == 1) c.differential.at(w[0], j) = coeff;
    require_valid(c);
    return c;
}

namespace {

FilteredDGA apply_elementary(const FilteredDGA& dga, const MoveElementary& m) {
    const auto& ff = dga.field();
    std::uint32_t t = dga.index_of(m.target);
    std::uint32_t unit = m.unit % ff.p();
    if (!unit) throw domain_error("elementary move unit must be invertible");
    const Generator& tg = dga.generator(t);
    FreeElement word_sum = from_named(dga, m.word_sum);
    for (const auto& [w, c] : word_sum.terms()) {
        (void)c;
        if (!(dga.word_action(w) < ExtAction(tg.action)))
            throw domain_error("elementary move word does not sit strictly below ell('" +
                               m.target + "')");
        int deg = 0;
        for (auto l : w) deg += dga.generator(l).degree;
        if (dga.degree_mod(deg) != dga.degree_mod(tg.degree))
            throw domain_error("elementary move word has wrong degree");
    }
    // Phi(t) = unit*t + w; Phi^{-1}(t) = unit^{-1} (t - w)
    FreeElement phi_t = add(ff, scale(ff, unit, FreeElement::single(Word{t})), word_sum);
    std::uint32_t uinv = ff.inv(unit);

    FilteredDGA out(dga.field(), dga.grading_modulus(), dga.action_level());
    for (std::uint32_t i = 0; i < dga.size(); ++i) out.add_generator(dga.generator(i));
    for (std::uint32_t g = 0; g < dga.size(); ++g) {
        FreeElement pre; // d(Phi^{-1}(g))
        if (g == t) {
            FreeElement dt = dga.differential(t);
            FreeElement dw = apply_differential(dga, word_sum);
            pre = scale(ff, uinv, add(ff, dt, scale(ff, ff.neg(1), dw)));
        } else {
            pre = dga.differential(g);
        }
        out.set_differential(g, substitute(ff, pre, t, phi_t));
    }
    require_valid(out);
    return out;
}

FilteredDGA apply_stabilize(const FilteredDGA& dga, const MoveStabilize& m) {
    if (dga.has_generator(m.x.name) || dga.has_generator(m.y.name))
        throw domain_error("stabilization names collide with existing generators");
    if (m.x.name == m.y.name) throw domain_error("stabilization needs two fresh names");
    if (dga.degree_mod(m.y.degree - 1) != dga.degree_mod(m.x.degree))
        throw domain_error("stabilization degrees must satisfy |y| = |x| + 1");
    if (!(m.x.action < m.y.action))
        throw domain_error("stabilization needs ell(x) < ell(y) for dy = x");
    FilteredDGA out = dga;
    std::uint32_t xi = out.add_generator(m.x);
    out.add_generator(m.y, FreeElement::single(Word{xi}));
    require_valid(out);
    return out;
}

FilteredDGA apply_destabilize(const FilteredDGA& dga, const MoveDestabilize& m) {
    std::uint32_t xi = dga.index_of(m.x), yi = dga.index_of(m.y);
    if (!(dga.differential(yi) == FreeElement::single(Word{xi})))
        throw domain_error("destabilize: d('" + m.y + "') is not exactly '" + m.x + "'");
    if (!dga.differential(xi).is_zero())
        throw domain_error("destabilize: d('" + m.x + "') is not zero");
    for (std::uint32_t g = 0; g < dga.size(); ++g) {
        if (g == xi || g == yi) continue;
        for (const auto& [w, c] : dga.differential(g).terms()) {
            (void)c;
            for (auto l : w)
                if (l == xi || l == yi)
                    throw domain_error("destabilize: pair still occurs in d('" +
                                       dga.generator(g).name + "')");
        }
    }
    FilteredDGA out = dga;
    out.remove_generators({xi, yi});
    require_valid(out);
    return out;
}

FilteredDGA apply_identify(const FilteredDGA& dga, const MoveIdentify& m) {
    if (m.mapping.size() != dga.size())
        throw domain_error("identification must cover every generator");
    std::map<std::string, int> new_names;
    for (const auto& [old_name, target] : m.mapping) {
        dga.index_of(old_name); // existence check
        if (++new_names[target.first] == 2)
            throw domain_error("identification maps two generators to '" + target.first + "'");
    }
    FilteredDGA out(dga.field(), dga.grading_modulus(), dga.action_level());
    for (std::uint32_t i = 0; i < dga.size(); ++i) {
        Generator g = dga.generator(i);
        const auto& target = m.mapping.at(g.name);
        g.name = target.first;
        g.action = target.second;
        out.add_generator(g);
    }
    for (std::uint32_t i = 0; i < dga.size(); ++i) out.set_differential(i, dga.differential(i));
    require_valid(out);
    return out;
}

} // namespace

FilteredDGA apply_tame(const FilteredDGA& dga, const TameMove& move) {
    return std::visit(
        [&](const auto& m) -> FilteredDGA {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MoveElementary>) return apply_elementary(dga, m);
            else if constexpr (std::is_same_v<T, MoveStabilize>) return apply_stabilize(dga, m);
            else if constexpr (std::is_same_v<T, MoveDestabilize>) return apply_destabilize(dga, m);
            else return apply_identify(dga, m);
        },
        move);
}

FilteredDGA apply_sti(const FilteredDGA& dga, const STI& sti) {
    FilteredDGA cur = dga;
    for (const auto& m : sti.moves) cur = apply_tame(cur, m);
    return cur;
}

TameMove invert_move(const FilteredDGA& source_dga, const TameMove& move) {
    const auto& ff = source_dga.field();
    return std::visit(
        [&](const auto& m) -> TameMove {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MoveElementary>) {
                std::uint32_t uinv = ff.inv(m.unit % ff.p());
                MoveElementary inv;
                inv.target = m.target;
                inv.unit = uinv;
                inv.word_sum = named_scale(ff, ff.neg(uinv), m.word_sum);
                return inv;
            } else if constexpr (std::is_same_v<T, MoveStabilize>) {
                return MoveDestabilize{m.x.name, m.y.name};
            } else if constexpr (std::is_same_v<T, MoveDestabilize>) {
                MoveStabilize st;
                st.x = source_dga.generator(source_dga.index_of(m.x));
                st.y = source_dga.generator(source_dga.index_of(m.y));
                return st;
            } else {
                MoveIdentify inv;
                for (const auto& [old_name, target] : m.mapping) {
                    const Generator& g = source_dga.generator(source_dga.index_of(old_name));
                    inv.mapping[target.first] = {old_name, g.action};
                }
                return inv;
            }
        },
        move);
}

Augmentation pullback_augmentation(const FilteredDGA& dga, const TameMove& move,
                                   const Augmentation& eps_after) {
    const auto& ff = dga.field();
    FilteredDGA after = apply_tame(dga, move);
    return std::visit(
        [&](const auto& m) -> Augmentation {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, MoveElementary>) {
                Augmentation eps = eps_after;
                std::uint32_t v = ff.mul(m.unit % ff.p(), eps_after.value(m.target));
                v = ff.add(v, eps_after.evaluate(after, from_named(after, m.word_sum)));
                eps.values[m.target] = v;
                return eps;
            } else if constexpr (std::is_same_v<T, MoveStabilize>) {
                Augmentation eps = eps_after;
                eps.values.erase(m.x.name);
                eps.values.erase(m.y.name);
                return eps;
            } else if constexpr (std::is_same_v<T, MoveDestabilize>) {
                // pull back along the quotient map that kills the pair
                Augmentation eps = eps_after;
                eps.values[m.x] = 0;
                eps.values[m.y] = 0;
                return eps;
            } else {
                Augmentation eps;
                for (const auto& [old_name, target] : m.mapping)
                    eps.values[old_name] = eps_after.value(target.first);
                return eps;
            }
        },
        move);
}

Augmentation pullback_augmentation(const FilteredDGA& dga, const STI& sti,
                                   const Augmentation& eps_after) {
    std::vector<FilteredDGA> stages{dga};
    for (const auto& m : sti.moves) stages.push_back(apply_tame(stages.back(), m));
    Augmentation eps = eps_after;
    for (std::size_t k = sti.moves.size(); k-- > 0;)
        eps = pullback_augmentation(stages[k], sti.moves[k], eps);
    return eps;
}

std::pair<STI, FilteredDGA> destabilize_pair(const FilteredDGA& dga, const std::string& x,
                                             const std::string& y) {
    const auto& ff = dga.field();
    std::uint32_t xi = dga.index_of(x), yi = dga.index_of(y);
    const FreeElement& dx = dga.differential(xi);
    std::uint32_t k = dx.coeff(Word{yi});
    if (!k)
        throw domain_error("destabilize_pair: '" + y + "' is not the leading term of d('" + x + "')");
    for (const auto& [w, c] : dx.terms()) {
        (void)c;
        if (w == Word{yi}) continue;
        if (!(dga.word_action(w) < ExtAction(dga.generator(yi).action)))
            throw domain_error("destabilize_pair: d('" + x + "') has a term at or above ell('" + y +
                               "')");
    }

    STI sti;
    FilteredDGA cur = dga;
    auto push = [&](TameMove m) {
        cur = apply_tame(cur, m);
        sti.moves.push_back(std::move(m));
    };

    if (k != 1) push(MoveElementary{y, ff.inv(k), NamedElement{}});
    {
        FreeElement w = cur.differential(cur.index_of(x));
        FreeElement rest;
        for (const auto& [word, c] : w.terms())
            if (!(word == Word{cur.index_of(y)})) rest.add_term(ff, word, c);
        if (!rest.is_zero())
            push(MoveElementary{y, 1, to_named(cur, scale(ff, ff.neg(1), rest))});
    }

    // Eliminate remaining occurrences of the pair from other differentials,
    // lowest-action generator first, highest-action word first.  Decorated
    // words can proliferate on adversarial inputs; the cap turns runaway
    // instances into an error instead of a stall.
    const int move_cap = 500;
    const std::size_t term_cap = 4000;
    for (int step = 0;; ++step) {
        if (step >= move_cap)
            throw domain_error("destabilize_pair: elimination did not terminate within the move cap");
        std::size_t total_terms = 0;
        for (std::uint32_t g = 0; g < cur.size(); ++g)
            total_terms += cur.differential(g).terms().size();
        if (total_terms > term_cap)
            throw domain_error("destabilize_pair: differential growth exceeds the size cap");
        std::uint32_t cxi = cur.index_of(x), cyi = cur.index_of(y);
        std::vector<std::uint32_t> order;
        for (std::uint32_t g = 0; g < cur.size(); ++g)
            if (g != cxi && g != cyi) order.push_back(g);
        std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            const Action& aa = cur.generator(a).action;
            const Action& ab = cur.generator(b).action;
            if (aa != ab) return aa < ab;
            return a < b;
        });

        bool acted = false;
        for (auto z : order) {
            // highest-action word of d(z) containing y
            std::optional<Word> pick;
            std::uint32_t pick_coeff = 0;
            ExtAction pick_action = ExtAction::neg_inf();
            for (const auto& [w, c] : cur.differential(z).terms()) {
                if (std::find(w.begin(), w.end(), cyi) == w.end()) continue;
                ExtAction wa = cur.word_action(w);
                if (!pick || pick_action < wa) {
                    pick = w;
                    pick_coeff = c;
                    pick_action = wa;
                }
            }
            if (!pick) continue;
            // v = coeff * (-1)^{|prefix|} * prefix x suffix, with the leftmost y
            auto pos = std::find(pick->begin(), pick->end(), cyi);
            Word vword(pick->begin(), pos);
            int prefix_deg = 0;
            for (auto l : vword) prefix_deg += cur.generator(l).degree;
            vword.push_back(cxi);
            vword.insert(vword.end(), pos + 1, pick->end());
            std::uint32_t coeff = pick_coeff;
            if (ff.p() != 2 && (prefix_deg % 2 != 0)) coeff = ff.neg(coeff);
            // substituting z -> z + v doubles every z-occurrence; bail out
            // before a move whose expansion would blow up
            std::size_t estimated = 0;
            for (std::uint32_t g = 0; g < cur.size() && estimated <= term_cap; ++g)
                for (const auto& [w, cc] : cur.differential(g).terms()) {
                    (void)cc;
                    std::size_t occ = 0;
                    for (auto l : w)
                        if (l == z) ++occ;
                    estimated += std::size_t(1) << std::min<std::size_t>(occ, 20);
                }
            if (estimated > term_cap)
                throw domain_error("destabilize_pair: differential growth exceeds the size cap");
            push(MoveElementary{cur.generator(z).name, 1,
                                to_named(cur, FreeElement::single(vword, coeff))});
            acted = true;
            break;
        }
        if (acted) continue;

        // no y-words left outside d(x); x-words are then ruled out by d^2 = 0
        for (auto z : order)
            for (const auto& [w, c] : cur.differential(z).terms()) {
                (void)c;
                if (std::find(w.begin(), w.end(), cxi) != w.end())
                    throw domain_error("destabilize_pair: residual occurrence of '" + x + "' in d('" +
                                       cur.generator(z).name + "')");
            }
        break;
    }

    push(MoveDestabilize{y, x}); // dy' = x' with y' = x (the spec's x has d x = y)
    return {std::move(sti), std::move(cur)};
}

Mat2 mat2_mul(const Mat2& x, const Mat2& y) {
    return Mat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
                x.c * y.b + x.d * y.d};
}

namespace {

Mat2 e1_pow(long long k) { return Mat2{1, k, 0, 1}; }
Mat2 e2_pow(long long k) { return Mat2{1, 0, k, 1}; }

bool is_e1(const Mat2& m) { return m.a == 1 && m.d == 1 && m.c == 0; }
bool is_e2(const Mat2& m) { return m.a == 1 && m.d == 1 && m.b == 0; }

} // namespace

std::vector<Mat2> decompose_gl2z(const Mat2& m) {
    long long det = m.a * m.d - m.b * m.c;
    if (det != 1 && det != -1) throw domain_error("matrix determinant must be +-1");

    std::vector<Mat2> factors;
    Mat2 r = m;
    if (det == -1) {
        const Mat2 flip{-1, 0, 0, 1};
        factors.push_back(flip);
        r = mat2_mul(flip, r); // flip^{-1} = flip
    }

    // reduce r to the identity by left multiplications, recording inverses
    std::vector<Mat2> applied;
    auto apply_left = [&](const Mat2& e, const Mat2& e_inv) {
        r = mat2_mul(e, r);
        applied.push_back(e_inv);
    };
    int guard = 0;
    while (r.c != 0) {
        if (++guard > 256) throw domain_error("gl2z reduction failed to converge");
        if (r.a == 0) {
            apply_left(e1_pow(1), e1_pow(-1)); // row1 += row2 makes a nonzero
            continue;
        }
        if (std::abs(r.c) >= std::abs(r.a)) {
            long long q = r.c / r.a;
            if (q != 0) apply_left(e2_pow(-q), e2_pow(q));
            else apply_left(e2_pow(r.c > 0 ? -1 : 1), e2_pow(r.c > 0 ? 1 : -1));
        } else {
            long long q = r.a / r.c;
            if (q != 0) apply_left(e1_pow(-q), e1_pow(q));
            else apply_left(e1_pow(r.a > 0 ? -1 : 1), e1_pow(r.a > 0 ? 1 : -1));
        }
    }
    if (r.a == -1) { // multiply by -I = (E1 E2^{-1} E1)^2
        const Mat2 steps[6] = {e1_pow(1), e2_pow(-1), e1_pow(1), e1_pow(1), e2_pow(-1), e1_pow(1)};
        const Mat2 invs[6] = {e1_pow(-1), e2_pow(1), e1_pow(-1), e1_pow(-1), e2_pow(1), e1_pow(-1)};
        for (int i = 0; i < 6; ++i) apply_left(steps[i], invs[i]);
    }
    if (r.a != 1 || r.d != 1) throw domain_error("gl2z reduction reached an unexpected form");
    if (r.b != 0) apply_left(e1_pow(-r.b), e1_pow(r.b));

    // m = applied[0] * applied[1] * ...
    for (const auto& f : applied) factors.push_back(f);

    // coalesce adjacent powers of the same generator
    std::vector<Mat2> out;
    for (const auto& f : factors) {
        if (!out.empty()) {
            Mat2& last = out.back();
            if (is_e1(last) && is_e1(f)) {
                last.b += f.b;
                if (last.b == 0) out.pop_back();
                continue;
            }
            if (is_e2(last) && is_e2(f)) {
                last.c += f.c;
                if (last.c == 0) out.pop_back();
                continue;
            }
        }
        out.push_back(f);
    }

    Mat2 check{1, 0, 0, 1};
    for (const auto& f : out) check = mat2_mul(check, f);
    if (!(check == m)) throw domain_error("gl2z factorization self-check failed");
    return out;
}

} // namespace rfcone
