#include "rfcone/algebra.hpp"

#include <algorithm>
#include <sstream>

namespace rfcone {

std::string flavor_name(Flavor f) {
    switch (f) {
    case Flavor::Pure: return "pure";
    case Flavor::Mixed01: return "mixed01";
    case Flavor::Mixed10: return "mixed10";
    case Flavor::Orbit: return "orbit";
    }
    return "pure";
}

Flavor flavor_from_name(const std::string& s) {
    if (s == "pure") return Flavor::Pure;
    if (s == "mixed01") return Flavor::Mixed01;
    if (s == "mixed10") return Flavor::Mixed10;
    if (s == "orbit") return Flavor::Orbit;
    throw domain_error("unknown generator flavor '" + s + "'");
}

FreeElement FreeElement::unit(std::uint32_t coeff) {
    FreeElement e;
    if (coeff) e.terms_[Word{}] = coeff;
    return e;
}

FreeElement FreeElement::single(Word w, std::uint32_t coeff) {
    FreeElement e;
    if (coeff) e.terms_[std::move(w)] = coeff;
    return e;
}

void FreeElement::add_term(const GroundField& ff, const Word& w, std::uint32_t coeff) {
    coeff %= ff.p();
    if (!coeff) return;
    auto it = terms_.find(w);
    if (it == terms_.end()) {
        terms_[w] = coeff;
        return;
    }
    it->second = ff.add(it->second, coeff);
    if (it->second == 0) terms_.erase(it);
}

std::uint32_t FreeElement::coeff(const Word& w) const {
    auto it = terms_.find(w);
    return it == terms_.end() ? 0 : it->second;
}

std::string ValidationReport::to_string() const {
    if (ok()) return "pass";
    std::ostringstream os;
    for (const auto& v : violations) os << v << "\n";
    return os.str();
}

FilteredDGA::FilteredDGA(GroundField field, int grading_modulus, ExtAction action_level)
    : field_(field), grading_modulus_(grading_modulus), action_level_(std::move(action_level)) {
    if (grading_modulus < 0) throw domain_error("grading modulus must be >= 0");
}

std::uint32_t FilteredDGA::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw domain_error("unknown generator '" + name + "'");
    return it->second;
}

bool FilteredDGA::has_generator(const std::string& name) const { return index_.count(name) > 0; }

std::uint32_t FilteredDGA::add_generator(const Generator& g, FreeElement differential) {
    if (index_.count(g.name)) throw domain_error("duplicate generator name '" + g.name + "'");
    auto idx = static_cast<std::uint32_t>(generators_.size());
    generators_.push_back(g);
    diffs_.push_back(std::move(differential));
    index_[g.name] = idx;
    return idx;
}

void FilteredDGA::set_differential(std::uint32_t gen, FreeElement d) { diffs_.at(gen) = std::move(d); }

void FilteredDGA::remove_generators(const std::vector<std::uint32_t>& idx) {
    std::vector<bool> drop(generators_.size(), false);
    for (auto i : idx) drop.at(i) = true;
    std::vector<std::uint32_t> remap(generators_.size());
    std::vector<Generator> gens;
    std::vector<FreeElement> diffs;
    for (std::uint32_t i = 0; i < generators_.size(); ++i) {
        if (drop[i]) continue;
        remap[i] = static_cast<std::uint32_t>(gens.size());
        gens.push_back(generators_[i]);
        diffs.push_back(diffs_[i]);
    }
    // reindex surviving differentials
    for (auto& d : diffs) {
        FreeElement nd;
        for (const auto& [w, c] : d.terms()) {
            Word nw;
            nw.reserve(w.size());
            for (auto letter : w) {
                if (drop[letter])
                    throw domain_error("cannot remove generator '" + generators_[letter].name +
                                       "': still referenced by a differential");
                nw.push_back(remap[letter]);
            }
            nd.add_term(field_, nw, c);
        }
        d = std::move(nd);
    }
    generators_ = std::move(gens);
    diffs_ = std::move(diffs);
    index_.clear();
    for (std::uint32_t i = 0; i < generators_.size(); ++i) index_[generators_[i].name] = i;
}

int FilteredDGA::degree_mod(int d) const {
    if (grading_modulus_ == 0) return d;
    int m = grading_modulus_;
    return ((d % m) + m) % m;
}

ExtAction FilteredDGA::word_action(const Word& w) const {
    Action total;
    for (auto letter : w) total = total + generators_.at(letter).action;
    return ExtAction(total);
}

ExtAction FilteredDGA::element_action(const FreeElement& e) const {
    ExtAction best = ExtAction::neg_inf();
    for (const auto& [w, c] : e.terms()) {
        (void)c;
        ExtAction a = word_action(w);
        if (best < a) best = a;
    }
    return best;
}

std::optional<int> FilteredDGA::element_degree(const FreeElement& e) const {
    std::optional<int> deg;
    for (const auto& [w, c] : e.terms()) {
        (void)c;
        int d = 0;
        for (auto letter : w) d += generators_.at(letter).degree;
        d = degree_mod(d);
        if (!deg)
            deg = d;
        else if (*deg != d)
            return std::nullopt;
    }
    return deg;
}

NamedElement to_named(const FilteredDGA& dga, const FreeElement& e) {
    NamedElement r;
    for (const auto& [w, c] : e.terms()) {
        NamedWord nw;
        nw.reserve(w.size());
        for (auto l : w) nw.push_back(dga.generator(l).name);
        r[nw] = c;
    }
    return r;
}

FreeElement from_named(const FilteredDGA& dga, const NamedElement& e) {
    FreeElement r;
    for (const auto& [nw, c] : e) {
        Word w;
        w.reserve(nw.size());
        for (const auto& name : nw) w.push_back(dga.index_of(name));
        r.add_term(dga.field(), w, c);
    }
    return r;
}

NamedElement named_scale(const GroundField& ff, std::uint32_t k, const NamedElement& e) {
    NamedElement r;
    for (const auto& [w, c] : e) {
        std::uint32_t v = ff.mul(k, c);
        if (v) r[w] = v;
    }
    return r;
}

bool dga_equal_named(const FilteredDGA& a, const FilteredDGA& b) {
    if (a.field() != b.field() || a.grading_modulus() != b.grading_modulus()) return false;
    if (a.size() != b.size() || a.action_level() != b.action_level()) return false;
    for (std::uint32_t i = 0; i < a.size(); ++i) {
        const Generator& g = a.generator(i);
        if (!b.has_generator(g.name)) return false;
        const Generator& h = b.generator(b.index_of(g.name));
        if (g.degree != h.degree || g.action != h.action || g.flavor != h.flavor) return false;
        if (to_named(a, a.differential(i)) != to_named(b, b.differential(b.index_of(g.name))))
            return false;
    }
    return true;
}

FreeElement multiply(const FilteredDGA& dga, const FreeElement& a, const FreeElement& b) {
    auto check_context = [&](const FreeElement& e) {
        for (const auto& [w, c] : e.terms()) {
            (void)c;
            for (auto l : w)
                if (l >= dga.size())
                    throw domain_error("element references a generator outside this algebra");
        }
    };
    check_context(a);
    check_context(b);
    FreeElement r;
    for (const auto& [wa, ca] : a.terms())
        for (const auto& [wb, cb] : b.terms()) {
            Word w = wa;
            w.insert(w.end(), wb.begin(), wb.end());
            r.add_term(dga.field(), w, dga.field().mul(ca, cb));
        }
    return r;
}

FreeElement element_add(const FilteredDGA& dga, const FreeElement& a, const FreeElement& b) {
    FreeElement r = a;
    for (const auto& [w, c] : b.terms()) r.add_term(dga.field(), w, c);
    return r;
}

FreeElement element_scale(const FilteredDGA& dga, std::uint32_t k, const FreeElement& a) {
    FreeElement r;
    for (const auto& [w, c] : a.terms()) r.add_term(dga.field(), w, dga.field().mul(k, c));
    return r;
}

FreeElement apply_differential(const FilteredDGA& dga, const FreeElement& e) {
    const auto& ff = dga.field();
    FreeElement r;
    for (const auto& [w, c] : e.terms()) {
        int sign_deg = 0; // degree of the prefix, for the Koszul sign
        for (std::size_t i = 0; i < w.size(); ++i) {
            std::uint32_t coeff = c;
            if (ff.p() != 2 && (sign_deg % 2 != 0)) coeff = ff.neg(coeff);
            const FreeElement& dletter = dga.differential(w[i]);
            for (const auto& [dw, dc] : dletter.terms()) {
                Word nw(w.begin(), w.begin() + i);
                nw.insert(nw.end(), dw.begin(), dw.end());
                nw.insert(nw.end(), w.begin() + i + 1, w.end());
                r.add_term(ff, nw, ff.mul(coeff, dc));
            }
            sign_deg += dga.generator(w[i]).degree;
        }
    }
    return r;
}

ValidationReport validate_dga(const FilteredDGA& dga) {
    ValidationReport rep;
    const int m = dga.grading_modulus();
    if (dga.field().p() != 2 && m != 0 && m % 2 != 0)
        rep.violations.push_back("odd characteristic requires an even or Z grading (Koszul signs)");
    for (std::uint32_t i = 0; i < dga.size(); ++i) {
        const Generator& g = dga.generator(i);
        if (action_sign(g.action) <= 0)
            rep.violations.push_back("generator '" + g.name +
                                     "' must have positive action (chord length)");
        if (!(ExtAction(g.action) < dga.action_level()))
            rep.violations.push_back("generator '" + g.name + "' action is not below the action ceiling");
        const FreeElement& d = dga.differential(i);
        if (d.is_zero()) continue;
        ExtAction da = dga.element_action(d);
        if (!(da < ExtAction(g.action)))
            rep.violations.push_back("filtration not strictly decreased by d('" + g.name + "')");
        auto deg = dga.element_degree(d);
        if (!deg)
            rep.violations.push_back("d('" + g.name + "') is not degree-homogeneous");
        else if (*deg != dga.degree_mod(g.degree - 1))
            rep.violations.push_back("d('" + g.name + "') is not of degree -1");
    }
    for (std::uint32_t i = 0; i < dga.size(); ++i) {
        FreeElement dd = apply_differential(dga, dga.differential(i));
        if (!dd.is_zero()) {
            rep.violations.push_back("d^2 != 0 at generator '" + dga.generator(i).name + "'");
            break;
        }
    }
    return rep;
}

void require_valid(const FilteredDGA& dga) {
    ValidationReport rep = validate_dga(dga);
    if (!rep.ok()) throw domain_error("invalid DGA:\n" + rep.to_string());
}

} // namespace rfcone
