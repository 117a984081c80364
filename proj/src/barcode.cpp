#include "rfcone/barcode.hpp"

#include <algorithm>
#include <sstream>

namespace rfcone {

namespace {

int ext_cmp(const ExtAction& a, const ExtAction& b) {
    if (a < b) return -1;
    if (b < a) return 1;
    return 0;
}

} // namespace

bool bar_less(const Bar& a, const Bar& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    if (a.start != b.start) return a.start < b.start;
    return ext_cmp(a.end, b.end) < 0;
}

bool operator==(const Bar& a, const Bar& b) {
    return a.degree == b.degree && a.start == b.start && a.end == b.end;
}

void Barcode::canonicalize() { std::sort(bars.begin(), bars.end(), bar_less); }

std::map<int, std::size_t> Barcode::infinite_bars_per_degree() const {
    std::map<int, std::size_t> r;
    for (const auto& b : bars)
        if (!b.finite()) ++r[b.degree];
    return r;
}

bool same_bar_multiset(const Barcode& a, const Barcode& b) {
    if (a.bars.size() != b.bars.size()) return false;
    auto x = a, y = b;
    x.canonicalize();
    y.canonicalize();
    for (std::size_t i = 0; i < x.bars.size(); ++i)
        if (!(x.bars[i] == y.bars[i])) return false;
    return true;
}

std::string barcode_to_string(const Barcode& bc) {
    auto c = bc;
    c.canonicalize();
    std::ostringstream os;
    for (const auto& b : c.bars)
        os << "deg " << b.degree << ": [" << action_to_string(b.start) << ", "
           << ext_action_to_string(b.end) << ")\n";
    return os.str();
}

Reduction reduce_complex(const FilteredComplex& c) {
    const std::size_t n = c.dim();
    const auto& ff = c.field;

    Reduction red;
    red.order.resize(n);
    for (std::size_t i = 0; i < n; ++i) red.order[i] = i;
    std::stable_sort(red.order.begin(), red.order.end(), [&](std::size_t a, std::size_t b) {
        if (c.basis[a].action != c.basis[b].action) return c.basis[a].action < c.basis[b].action;
        return a < b;
    });
    std::vector<std::size_t> pos(n); // basis index -> sorted position
    for (std::size_t k = 0; k < n; ++k) pos[red.order[k]] = k;

    // columns in sorted-position coordinates
    std::vector<std::vector<std::uint32_t>> col(n, std::vector<std::uint32_t>(n, 0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t v = c.differential.at(i, j);
            if (v) col[pos[j]][pos[i]] = v;
        }
    red.combinations = FpMatrix::identity(n); // in sorted coordinates for now

    auto low_of = [&](const std::vector<std::uint32_t>& v) -> std::ptrdiff_t {
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(n) - 1; i >= 0; --i)
            if (v[i]) return i;
        return -1;
    };

    std::vector<std::ptrdiff_t> pivot_owner(n, -1); // row position -> column position
    std::vector<std::ptrdiff_t> lows(n, -1);
    for (std::size_t j = 0; j < n; ++j) {
        auto lw = low_of(col[j]);
        while (lw >= 0 && pivot_owner[lw] >= 0) {
            std::size_t j2 = static_cast<std::size_t>(pivot_owner[lw]);
            std::uint32_t factor = ff.mul(col[j][lw], ff.inv(col[j2][lw]));
            for (std::size_t i = 0; i <= static_cast<std::size_t>(lw); ++i)
                col[j][i] = ff.sub(col[j][i], ff.mul(factor, col[j2][i]));
            for (std::size_t i = 0; i < n; ++i)
                red.combinations.at(i, j) =
                    ff.sub(red.combinations.at(i, j), ff.mul(factor, red.combinations.at(i, j2)));
            lw = low_of(col[j]);
        }
        lows[j] = lw;
        if (lw >= 0) pivot_owner[lw] = static_cast<std::ptrdiff_t>(j);
    }

    std::vector<bool> in_pair(n, false);
    for (std::size_t j = 0; j < n; ++j) {
        if (lows[j] < 0) continue;
        red.pairs.emplace_back(red.order[static_cast<std::size_t>(lows[j])], red.order[j]);
        in_pair[j] = true;
        in_pair[static_cast<std::size_t>(lows[j])] = true;
    }
    for (std::size_t k = 0; k < n; ++k)
        if (!in_pair[k]) red.unpaired.push_back(red.order[k]);

    // rewrite V in original basis coordinates: V_orig[a][b] = V[pos[a]][pos[b]]
    FpMatrix v_orig(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) v_orig.at(a, b) = red.combinations.at(pos[a], pos[b]);
    red.combinations = std::move(v_orig);
    return red;
}

Barcode compute_barcode(const FilteredComplex& c) {
    Reduction red = reduce_complex(c);
    Barcode bc;
    bc.window_lo = c.window_lo;
    bc.window_hi = c.window_hi;
    for (const auto& [birth, death] : red.pairs) {
        Bar b;
        b.start = c.basis[birth].action;
        b.end = ExtAction(c.basis[death].action);
        b.degree = c.degree_mod(c.basis[birth].degree);
        bc.bars.push_back(b);
    }
    for (auto i : red.unpaired) {
        Bar b;
        b.start = c.basis[i].action;
        b.end = ExtAction::pos_inf();
        b.degree = c.degree_mod(c.basis[i].degree);
        bc.bars.push_back(b);
    }
    bc.canonicalize();
    return bc;
}

std::string event_kind_name(const Event& e) {
    struct V {
        std::string operator()(const EventHandleSlide&) const { return "handle-slide"; }
        std::string operator()(const EventBirth&) const { return "birth"; }
        std::string operator()(const EventDeath&) const { return "death"; }
        std::string operator()(const EventExitBelow&) const { return "exit-below"; }
        std::string operator()(const EventEntryBelow&) const { return "entry-below"; }
        std::string operator()(const EventExitAbove&) const { return "exit-above"; }
        std::string operator()(const EventEntryAbove&) const { return "entry-above"; }
    };
    return std::visit(V{}, e);
}

namespace {

bool action_taken(const FilteredComplex& c, const Action& a) {
    for (const auto& b : c.basis)
        if (b.action == a) return true;
    return false;
}

FilteredComplex erase_element(const FilteredComplex& c, std::size_t idx) {
    FilteredComplex r = c;
    r.basis.erase(r.basis.begin() + static_cast<std::ptrdiff_t>(idx));
    FpMatrix m(c.dim() - 1, c.dim() - 1);
    for (std::size_t i = 0, ii = 0; i < c.dim(); ++i) {
        if (i == idx) continue;
        for (std::size_t j = 0, jj = 0; j < c.dim(); ++j) {
            if (j == idx) continue;
            m.at(ii, jj) = c.differential.at(i, j);
            ++jj;
        }
        ++ii;
    }
    r.differential = std::move(m);
    return r;
}

struct RuleResult {
    Barcode barcode;
    FilteredComplex complex;
};

RuleResult apply_handle_slide(const Barcode& bc, const FilteredComplex& c, const EventHandleSlide& e) {
    std::size_t t = c.index_of(e.target), a = c.index_of(e.addend);
    if (t == a) throw domain_error("handle-slide target equals addend");
    if (c.degree_mod(c.basis[t].degree) != c.degree_mod(c.basis[a].degree))
        throw domain_error("handle-slide between different degrees");
    if (c.basis[t].action < c.basis[a].action)
        throw domain_error("handle-slide is not action-compatible");
    const auto& ff = c.field;
    std::uint32_t k = e.coeff % ff.p();
    if (!k) throw domain_error("handle-slide with zero coefficient");
    FilteredComplex r = c;
    // new basis f_t = e_t + k e_a; D' = P^{-1} D P with P = I + k E_{a,t}
    for (std::size_t i = 0; i < c.dim(); ++i) // column t of D' gains D * (k e_a)
        r.differential.at(i, t) = ff.add(r.differential.at(i, t), ff.mul(k, c.differential.at(i, a)));
    for (std::size_t j = 0; j < c.dim(); ++j) // row a of D' loses k * row t
        r.differential.at(a, j) = ff.sub(r.differential.at(a, j), ff.mul(k, r.differential.at(t, j)));
    return {bc, std::move(r)};
}

RuleResult apply_birth(const Barcode& bc, const FilteredComplex& c, const EventBirth& e) {
    for (const auto& b : c.basis)
        if (b.name == e.x.name || b.name == e.y.name)
            throw domain_error("birth generator name collision '" + b.name + "'");
    if (!(e.y.action < e.x.action)) throw domain_error("birth pair actions out of order");
    if (action_taken(c, e.x.action) || action_taken(c, e.y.action))
        throw domain_error("birth collides with an existing action value");
    if (c.degree_mod(e.x.degree - 1) != c.degree_mod(e.y.degree))
        throw domain_error("birth pair degrees are not adjacent");
    if (ExtAction(e.y.action) < c.window_lo || !(ExtAction(e.x.action) < c.window_hi))
        throw domain_error("birth pair outside the action window");
    std::uint32_t k = e.unit % c.field.p();
    if (!k) throw domain_error("birth unit must be nonzero");

    FilteredComplex r = c;
    std::size_t n = c.dim();
    r.basis.push_back(e.y);
    r.basis.push_back(e.x);
    FpMatrix m(n + 2, n + 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = c.differential.at(i, j);
    m.at(n, n + 1) = k; // dx = k y
    r.differential = std::move(m);

    Barcode nb = bc;
    nb.bars.push_back(Bar{e.y.action, ExtAction(e.x.action), c.degree_mod(e.y.degree)});
    nb.canonicalize();
    return {std::move(nb), std::move(r)};
}

RuleResult apply_death(const Barcode& bc, const FilteredComplex& c, const EventDeath& e) {
    std::size_t x = c.index_of(e.x), y = c.index_of(e.y);
    const auto& ff = c.field;
    std::uint32_t k = c.differential.at(y, x);
    if (!k) throw domain_error("death pair ('" + e.x + "','" + e.y + "'): <dx, y> is not a unit");
    const Action& ax = c.basis[x].action;
    const Action& ay = c.basis[y].action;
    if (!(ay < ax)) throw domain_error("death pair actions out of order");
    for (std::size_t i = 0; i < c.dim(); ++i) {
        if (i == x || i == y) continue;
        const Action& a = c.basis[i].action;
        if (!(a < ay) && !(ax < a))
            throw domain_error("death pair is not action-adjacent: '" + c.basis[i].name +
                               "' lies between");
        if (c.differential.at(i, x) != 0 && !(a < ay))
            throw domain_error("death pair: dx has a term at or above ell(y)");
    }

    // Gaussian cancellation of the pair
    FilteredComplex r = c;
    std::uint32_t kinv = ff.inv(k);
    for (std::size_t z = 0; z < c.dim(); ++z) {
        if (z == x || z == y) continue;
        std::uint32_t cz = c.differential.at(y, z);
        if (!cz) continue;
        std::uint32_t f = ff.mul(cz, kinv);
        for (std::size_t i = 0; i < c.dim(); ++i)
            r.differential.at(i, z) = ff.sub(r.differential.at(i, z), ff.mul(f, c.differential.at(i, x)));
    }
    std::size_t hi = std::max(x, y), lo = std::min(x, y);
    r = erase_element(r, hi);
    r = erase_element(r, lo);

    Barcode nb;
    nb.window_lo = bc.window_lo;
    nb.window_hi = bc.window_hi;
    Bar dying{ay, ExtAction(ax), c.degree_mod(c.basis[y].degree)};
    bool removed = false;
    for (const auto& b : bc.bars) {
        if (!removed && b == dying) {
            removed = true;
            continue;
        }
        nb.bars.push_back(b);
    }
    if (!removed) throw domain_error("death event: bar [ell(y), ell(x)) not present in barcode");
    nb.canonicalize();
    return {std::move(nb), std::move(r)};
}

RuleResult apply_exit_below(const Barcode& bc, const FilteredComplex& c, const EventExitBelow& e) {
    std::size_t g = c.index_of(e.gen);
    for (std::size_t i = 0; i < c.dim(); ++i)
        if (i != g && !(c.basis[g].action < c.basis[i].action))
            throw domain_error("exit below: '" + e.gen + "' is not the strict action minimum");
    for (std::size_t i = 0; i < c.dim(); ++i)
        if (c.differential.at(i, g) != 0)
            throw domain_error("exit below: minimum-action generator has nonzero boundary");

    Reduction red = reduce_complex(c);
    std::optional<std::size_t> killer;
    for (const auto& [birth, death] : red.pairs)
        if (birth == g) killer = death;

    FilteredComplex r = erase_element(c, g);

    Barcode nb;
    nb.window_lo = bc.window_lo;
    nb.window_hi = bc.window_hi;
    Bar leaving{c.basis[g].action,
                killer ? ExtAction(c.basis[*killer].action) : ExtAction::pos_inf(),
                c.degree_mod(c.basis[g].degree)};
    bool removed = false;
    for (const auto& b : bc.bars) {
        if (!removed && b == leaving) {
            removed = true;
            continue;
        }
        nb.bars.push_back(b);
    }
    if (!removed) throw domain_error("exit below: expected bar not present in barcode");
    if (killer) // finite bar becomes the infinite bar of the surviving class
        nb.bars.push_back(Bar{c.basis[*killer].action, ExtAction::pos_inf(),
                              c.degree_mod(c.basis[*killer].degree)});
    nb.canonicalize();
    return {std::move(nb), std::move(r)};
}

RuleResult apply_exit_above(const Barcode& bc, const FilteredComplex& c, const EventExitAbove& e) {
    std::size_t g = c.index_of(e.gen);
    for (std::size_t i = 0; i < c.dim(); ++i)
        if (i != g && !(c.basis[i].action < c.basis[g].action))
            throw domain_error("exit above: '" + e.gen + "' is not the strict action maximum");

    Reduction red = reduce_complex(c);
    std::optional<std::size_t> victim; // the class g kills, if any
    for (const auto& [birth, death] : red.pairs)
        if (death == g) victim = birth;

    FilteredComplex r = erase_element(c, g);

    Barcode nb;
    nb.window_lo = bc.window_lo;
    nb.window_hi = bc.window_hi;
    Bar leaving = victim ? Bar{c.basis[*victim].action, ExtAction(c.basis[g].action),
                               c.degree_mod(c.basis[*victim].degree)}
                         : Bar{c.basis[g].action, ExtAction::pos_inf(), c.degree_mod(c.basis[g].degree)};
    bool removed = false;
    for (const auto& b : bc.bars) {
        if (!removed && b == leaving) {
            removed = true;
            continue;
        }
        nb.bars.push_back(b);
    }
    if (!removed) throw domain_error("exit above: expected bar not present in barcode");
    if (victim)
        nb.bars.push_back(
            Bar{c.basis[*victim].action, ExtAction::pos_inf(), c.degree_mod(c.basis[*victim].degree)});
    nb.canonicalize();
    return {std::move(nb), std::move(r)};
}

RuleResult apply_entry_below(const Barcode& bc, const FilteredComplex& c, const EventEntryBelow& e) {
    for (const auto& b : c.basis) {
        if (b.name == e.gen.name) throw domain_error("entry below: name collision '" + b.name + "'");
        if (!(e.gen.action < b.action))
            throw domain_error("entry below: entering action is not the strict minimum");
    }
    if (ExtAction(e.gen.action) < c.window_lo)
        throw domain_error("entry below: entering action below the window");
    const auto& ff = c.field;
    std::vector<std::uint32_t> v(c.dim(), 0);
    for (const auto& [name, coeff] : e.row) {
        std::size_t z = c.index_of(name);
        if (c.degree_mod(c.basis[z].degree) != c.degree_mod(e.gen.degree + 1))
            throw domain_error("entry below: row entry at '" + name + "' violates the grading");
        v[z] = coeff % ff.p();
    }
    // d^2 = 0 in the extended complex: v composed with old boundary vanishes
    for (std::size_t j = 0; j < c.dim(); ++j) {
        std::uint32_t s = 0;
        for (std::size_t z = 0; z < c.dim(); ++z) s = ff.add(s, ff.mul(v[z], c.differential.at(z, j)));
        if (s) throw domain_error("entry below: row data breaks d^2 = 0 at column '" + c.basis[j].name + "'");
    }

    // partner: first birth column (ascending) whose reducing combination
    // pairs nontrivially with the new row
    Reduction red = reduce_complex(c);
    std::vector<bool> is_birth(c.dim(), false), paired_row(c.dim(), false);
    for (auto i : red.unpaired) is_birth[i] = true;
    for (const auto& [birth, death] : red.pairs) {
        (void)death;
        paired_row[birth] = true;
    }
    std::optional<std::size_t> partner;
    for (auto idx : red.order) {
        bool col_zero = paired_row[idx] || is_birth[idx]; // reduced column of idx vanishes
        if (!col_zero) continue;
        std::uint32_t val = 0;
        for (std::size_t u = 0; u < c.dim(); ++u)
            val = ff.add(val, ff.mul(v[u], red.combinations.at(u, idx)));
        if (val) {
            partner = idx;
            break;
        }
    }
    if (partner && paired_row[*partner])
        throw domain_error("entry below: entering generator attaches to a finite bar");

    FilteredComplex r = c;
    r.basis.push_back(e.gen);
    std::size_t n = c.dim();
    FpMatrix m(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = c.differential.at(i, j);
    for (std::size_t j = 0; j < n; ++j) m.at(n, j) = v[j];
    r.differential = std::move(m);

    Barcode nb = bc;
    int gdeg = c.degree_mod(e.gen.degree);
    if (!partner) {
        nb.bars.push_back(Bar{e.gen.action, ExtAction::pos_inf(), gdeg});
    } else {
        Bar old{c.basis[*partner].action, ExtAction::pos_inf(), c.degree_mod(c.basis[*partner].degree)};
        bool found = false;
        for (auto& b : nb.bars)
            if (!found && b == old) {
                b = Bar{e.gen.action, ExtAction(c.basis[*partner].action), gdeg};
                found = true;
            }
        if (!found) throw domain_error("entry below: expected infinite bar not present");
    }
    nb.canonicalize();
    return {std::move(nb), std::move(r)};
}

RuleResult apply_entry_above(const Barcode& bc, const FilteredComplex& c, const EventEntryAbove& e) {
    for (const auto& b : c.basis) {
        if (b.name == e.gen.name) throw domain_error("entry above: name collision '" + b.name + "'");
        if (!(b.action < e.gen.action))
            throw domain_error("entry above: entering action is not the strict maximum");
    }
    if (!(ExtAction(e.gen.action) < c.window_hi))
        throw domain_error("entry above: entering action above the window");
    const auto& ff = c.field;
    std::vector<std::uint32_t> col(c.dim(), 0);
    for (const auto& [name, coeff] : e.column) {
        std::size_t u = c.index_of(name);
        if (c.degree_mod(c.basis[u].degree) != c.degree_mod(e.gen.degree - 1))
            throw domain_error("entry above: column entry at '" + name + "' violates the grading");
        col[u] = coeff % ff.p();
    }
    for (std::size_t i = 0; i < c.dim(); ++i) {
        std::uint32_t s = 0;
        for (std::size_t u = 0; u < c.dim(); ++u) s = ff.add(s, ff.mul(c.differential.at(i, u), col[u]));
        if (s) throw domain_error("entry above: boundary column is not a cycle");
    }

    // reduce the new column against the existing reduced columns
    Reduction red = reduce_complex(c);
    std::vector<std::size_t> pos(c.dim());
    for (std::size_t k = 0; k < red.order.size(); ++k) pos[red.order[k]] = k;
    // reduced columns of c in sorted coordinates: D * V
    FpMatrix dv = fp_mul(ff, c.differential, red.combinations);
    std::vector<std::uint32_t> w(c.dim(), 0); // new column in sorted coords
    for (std::size_t u = 0; u < c.dim(); ++u) w[pos[u]] = col[u];
    std::map<std::size_t, std::size_t> owner; // low position -> column index
    for (std::size_t j = 0; j < c.dim(); ++j) {
        std::ptrdiff_t lw = -1;
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(c.dim()) - 1; i >= 0; --i)
            if (dv.at(red.order[static_cast<std::size_t>(i)], j)) { lw = i; break; }
        if (lw >= 0) owner[static_cast<std::size_t>(lw)] = j;
    }
    auto low_of = [&]() -> std::ptrdiff_t {
        for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(c.dim()) - 1; i >= 0; --i)
            if (w[static_cast<std::size_t>(i)]) return i;
        return -1;
    };
    std::ptrdiff_t lw = low_of();
    while (lw >= 0 && owner.count(static_cast<std::size_t>(lw))) {
        std::size_t j2 = owner[static_cast<std::size_t>(lw)];
        std::uint32_t piv = dv.at(red.order[static_cast<std::size_t>(lw)], j2);
        std::uint32_t f = ff.mul(w[static_cast<std::size_t>(lw)], ff.inv(piv));
        for (std::size_t i = 0; i <= static_cast<std::size_t>(lw); ++i)
            w[i] = ff.sub(w[i], ff.mul(f, dv.at(red.order[i], j2)));
        lw = low_of();
    }
    std::optional<std::size_t> victim;
    if (lw >= 0) victim = red.order[static_cast<std::size_t>(lw)];
    if (victim) {
        bool unpaired = std::find(red.unpaired.begin(), red.unpaired.end(), *victim) != red.unpaired.end();
        if (!unpaired) throw domain_error("entry above: entering boundary kills a finite bar");
    }

    FilteredComplex r = c;
    r.basis.push_back(e.gen);
    std::size_t n = c.dim();
    FpMatrix m(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m.at(i, j) = c.differential.at(i, j);
    for (std::size_t i = 0; i < n; ++i) m.at(i, n) = col[i];
    r.differential = std::move(m);

    Barcode nb = bc;
    if (!victim) {
        nb.bars.push_back(Bar{e.gen.action, ExtAction::pos_inf(), c.degree_mod(e.gen.degree)});
    } else {
        Bar old{c.basis[*victim].action, ExtAction::pos_inf(), c.degree_mod(c.basis[*victim].degree)};
        bool found = false;
        for (auto& b : nb.bars)
            if (!found && b == old) {
                b.end = ExtAction(e.gen.action);
                found = true;
            }
        if (!found) throw domain_error("entry above: expected infinite bar not present");
    }
    nb.canonicalize();
    return {std::move(nb), std::move(r)};
}

} // namespace

std::pair<Barcode, FilteredComplex> apply_event(const Barcode& bc, const FilteredComplex& c,
                                                const Event& event) {
    RuleResult res = std::visit(
        [&](const auto& e) -> RuleResult {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, EventHandleSlide>) return apply_handle_slide(bc, c, e);
            else if constexpr (std::is_same_v<T, EventBirth>) return apply_birth(bc, c, e);
            else if constexpr (std::is_same_v<T, EventDeath>) return apply_death(bc, c, e);
            else if constexpr (std::is_same_v<T, EventExitBelow>) return apply_exit_below(bc, c, e);
            else if constexpr (std::is_same_v<T, EventEntryBelow>) return apply_entry_below(bc, c, e);
            else if constexpr (std::is_same_v<T, EventExitAbove>) return apply_exit_above(bc, c, e);
            else return apply_entry_above(bc, c, e);
        },
        event);
    require_valid(res.complex);
    Barcode recomputed = compute_barcode(res.complex);
    recomputed.window_lo = res.barcode.window_lo;
    recomputed.window_hi = res.barcode.window_hi;
    if (!same_bar_multiset(res.barcode, recomputed))
        throw domain_error("internal: " + event_kind_name(event) +
                           " rule disagrees with recomputation");
    return {std::move(res.barcode), std::move(res.complex)};
}

} // namespace rfcone
