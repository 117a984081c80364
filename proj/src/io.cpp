#include "rfcone/io.hpp"

#include <algorithm>
#include <sstream>

namespace rfcone {

using nlohmann::json;

namespace {

const json& need(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw parse_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw parse_error(path + "/" + key, "missing field");
    return *it;
}

std::string need_string(const json& j, const std::string& key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_string()) throw parse_error(path + "/" + key, "expected a string");
    return v.get<std::string>();
}

long long need_int(const json& j, const std::string& key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number_integer()) throw parse_error(path + "/" + key, "expected an integer");
    return v.get<long long>();
}

Rat need_rational(const json& v, const std::string& path) {
    if (!v.is_string()) throw parse_error(path, "expected a rational string");
    auto r = try_parse_rational(v.get<std::string>());
    if (!r)
        throw parse_error(path, "invalid rational '" + v.get<std::string>() +
                                    "' (need reduced n/d with d > 0)");
    return *r;
}

} // namespace

nlohmann::json action_to_json(const Action& a) {
    if (a.is_rational()) return format_rational(a.c);
    return json{{"pi", format_rational(a.pi)}, {"const", format_rational(a.c)}};
}

Action json_to_action(const json& j, const std::string& path) {
    if (j.is_string()) return Action(need_rational(j, path));
    if (j.is_object()) {
        Rat pi = need_rational(need(j, "pi", path), path + "/pi");
        Rat c = need_rational(need(j, "const", path), path + "/const");
        return Action(pi, c);
    }
    throw parse_error(path, "expected a rational string or {pi, const}");
}

nlohmann::json ext_action_to_json(const ExtAction& a) {
    if (a.kind == ExtAction::NegInf) return "-inf";
    if (a.kind == ExtAction::PosInf) return "inf";
    return action_to_json(a.value);
}

ExtAction json_to_ext_action(const json& j, const std::string& path) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return ExtAction::pos_inf();
        if (s == "-inf") return ExtAction::neg_inf();
    }
    return ExtAction(json_to_action(j, path));
}

FilteredDGA json_to_dga(const json& j) {
    const std::string path = "";
    auto p = static_cast<std::uint32_t>(need_int(j, "field", path));
    int m = static_cast<int>(need_int(j, "grading_modulus", path));
    ExtAction level = ExtAction::pos_inf();
    if (j.contains("action_level")) level = json_to_ext_action(j["action_level"], "/action_level");

    FilteredDGA dga{GroundField(p), m, level};
    const json& gens = need(j, "generators", path);
    if (!gens.is_array()) throw parse_error("/generators", "expected an array");
    std::size_t idx = 0;
    for (const auto& g : gens) {
        std::string gp = "/generators/" + std::to_string(idx++);
        Generator gen;
        gen.name = need_string(g, "name", gp);
        gen.degree = static_cast<int>(need_int(g, "degree", gp));
        gen.action = json_to_action(need(g, "action", gp), gp + "/action");
        gen.flavor = g.contains("flavor") ? flavor_from_name(g["flavor"].get<std::string>())
                                          : Flavor::Pure;
        if (dga.has_generator(gen.name)) throw parse_error(gp + "/name", "duplicate generator name");
        dga.add_generator(gen);
    }
    idx = 0;
    for (const auto& g : gens) {
        std::string gp = "/generators/" + std::to_string(idx);
        if (g.contains("differential")) {
            const json& terms = g["differential"];
            if (!terms.is_array()) throw parse_error(gp + "/differential", "expected an array");
            FreeElement d;
            std::size_t ti = 0;
            for (const auto& t : terms) {
                std::string tp = gp + "/differential/" + std::to_string(ti++);
                const json& wordj = need(t, "word", tp);
                if (!wordj.is_array()) throw parse_error(tp + "/word", "expected an array");
                Word w;
                for (const auto& letter : wordj) {
                    if (!letter.is_string()) throw parse_error(tp + "/word", "expected names");
                    if (!dga.has_generator(letter.get<std::string>()))
                        throw parse_error(tp + "/word",
                                          "unknown generator '" + letter.get<std::string>() + "'");
                    w.push_back(dga.index_of(letter.get<std::string>()));
                }
                long long coeff = need_int(t, "coeff", tp);
                if (coeff <= 0 || coeff >= dga.field().p())
                    throw parse_error(tp + "/coeff", "coefficient must lie in 1..p-1");
                if (d.coeff(w) != 0) throw parse_error(tp + "/word", "duplicate word");
                d.add_term(dga.field(), w, static_cast<std::uint32_t>(coeff));
            }
            dga.set_differential(static_cast<std::uint32_t>(idx), std::move(d));
        }
        ++idx;
    }
    return dga;
}

nlohmann::json dga_to_json(const FilteredDGA& dga, const std::string& kind) {
    json j;
    j["kind"] = kind;
    j["version"] = 1;
    j["field"] = dga.field().p();
    j["grading_modulus"] = dga.grading_modulus();
    j["action_level"] = ext_action_to_json(dga.action_level());
    std::vector<std::uint32_t> order(dga.size());
    for (std::uint32_t i = 0; i < dga.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return dga.generator(a).name < dga.generator(b).name;
    });
    json gens = json::array();
    for (auto i : order) {
        const Generator& g = dga.generator(i);
        json gj;
        gj["name"] = g.name;
        gj["degree"] = g.degree;
        gj["action"] = action_to_json(g.action);
        gj["flavor"] = flavor_name(g.flavor);
        json terms = json::array();
        for (const auto& [w, c] : dga.differential(i).terms()) {
            json wt = json::array();
            for (auto l : w) wt.push_back(dga.generator(l).name);
            terms.push_back(json{{"word", wt}, {"coeff", c}});
        }
        gj["differential"] = terms;
        gens.push_back(gj);
    }
    j["generators"] = gens;
    return j;
}

FilteredComplex json_to_complex(const json& j) {
    FilteredComplex c;
    c.field = GroundField(static_cast<std::uint32_t>(need_int(j, "field", "")));
    c.grading_modulus = static_cast<int>(need_int(j, "grading_modulus", ""));
    if (j.contains("window")) {
        const json& w = j["window"];
        if (!w.is_array() || w.size() != 2) throw parse_error("/window", "expected [lo, hi]");
        c.window_lo = json_to_ext_action(w[0], "/window/0");
        c.window_hi = json_to_ext_action(w[1], "/window/1");
    }
    const json& basis = need(j, "basis", "");
    if (!basis.is_array()) throw parse_error("/basis", "expected an array");
    std::size_t idx = 0;
    for (const auto& b : basis) {
        std::string bp = "/basis/" + std::to_string(idx++);
        BasisElement e;
        e.name = need_string(b, "name", bp);
        e.degree = static_cast<int>(need_int(b, "degree", bp));
        e.action = json_to_action(need(b, "action", bp), bp + "/action");
        for (const auto& prev : c.basis)
            if (prev.name == e.name) throw parse_error(bp + "/name", "duplicate basis name");
        c.basis.push_back(e);
    }
    c.differential = FpMatrix(c.dim(), c.dim());
    if (j.contains("differential")) {
        const json& terms = j["differential"];
        if (!terms.is_array()) throw parse_error("/differential", "expected an array");
        std::size_t ti = 0;
        for (const auto& t : terms) {
            std::string tp = "/differential/" + std::to_string(ti++);
            std::string from = need_string(t, "from", tp);
            std::string to = need_string(t, "to", tp);
            long long coeff = need_int(t, "coeff", tp);
            if (coeff <= 0 || coeff >= c.field.p())
                throw parse_error(tp + "/coeff", "coefficient must lie in 1..p-1");
            std::size_t fi, toi;
            try {
                fi = c.index_of(from);
                toi = c.index_of(to);
            } catch (const domain_error& e) {
                throw parse_error(tp, e.what());
            }
            if (c.differential.at(toi, fi) != 0) throw parse_error(tp, "duplicate entry");
            c.differential.at(toi, fi) = static_cast<std::uint32_t>(coeff);
        }
    }
    return c;
}

nlohmann::json complex_to_json(const FilteredComplex& c) {
    json j;
    j["kind"] = "complex";
    j["version"] = 1;
    j["field"] = c.field.p();
    j["grading_modulus"] = c.grading_modulus;
    j["window"] = json::array({ext_action_to_json(c.window_lo), ext_action_to_json(c.window_hi)});
    std::vector<std::size_t> order(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return c.basis[a].name < c.basis[b].name; });
    json basis = json::array();
    for (auto i : order) {
        const auto& b = c.basis[i];
        basis.push_back(
            json{{"name", b.name}, {"degree", b.degree}, {"action", action_to_json(b.action)}});
    }
    j["basis"] = basis;
    json terms = json::array();
    for (auto col : order)
        for (auto row : order)
            if (c.differential.at(row, col) != 0)
                terms.push_back(json{{"from", c.basis[col].name},
                                     {"to", c.basis[row].name},
                                     {"coeff", c.differential.at(row, col)}});
    std::sort(terms.begin(), terms.end(), [](const json& a, const json& b) {
        if (a["from"] != b["from"]) return a["from"] < b["from"];
        return a["to"] < b["to"];
    });
    j["differential"] = terms;
    return j;
}

BananaCounts json_to_counts(const json& j) {
    BananaCounts counts;
    const json& entries = need(j, "entries", "");
    if (!entries.is_array()) throw parse_error("/entries", "expected an array");
    std::size_t i = 0;
    for (const auto& e : entries) {
        std::string ep = "/entries/" + std::to_string(i++);
        std::string x01 = need_string(e, "x01", ep);
        std::string y10 = need_string(e, "y10", ep);
        long long coeff = need_int(e, "coeff", ep);
        if (coeff <= 0) throw parse_error(ep + "/coeff", "coefficient must be positive");
        auto key = std::make_pair(x01, y10);
        if (counts.entries.count(key)) throw parse_error(ep, "duplicate entry");
        counts.entries[key] = static_cast<std::uint32_t>(coeff);
    }
    return counts;
}

nlohmann::json counts_to_json(const BananaCounts& counts) {
    json j;
    j["kind"] = "counts";
    j["version"] = 1;
    json entries = json::array();
    for (const auto& [key, coeff] : counts.entries)
        entries.push_back(json{{"x01", key.first}, {"y10", key.second}, {"coeff", coeff}});
    j["entries"] = entries;
    return j;
}

namespace {

PLFunction json_to_pl(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw parse_error(path, "expected a nonempty array of [t, value]");
    PLFunction f;
    std::size_t i = 0;
    for (const auto& pt : j) {
        std::string pp = path + "/" + std::to_string(i++);
        if (!pt.is_array() || pt.size() != 2) throw parse_error(pp, "expected [t, value]");
        Rat t = need_rational(pt[0], pp + "/0");
        Action v = json_to_action(pt[1], pp + "/1");
        if (!f.points.empty() && !(f.points.back().first < t))
            throw parse_error(pp + "/0", "breakpoints must increase strictly");
        f.points.emplace_back(t, v);
    }
    return f;
}

json pl_to_json(const PLFunction& f) {
    json a = json::array();
    for (const auto& [t, v] : f.points) a.push_back(json::array({format_rational(t), action_to_json(v)}));
    return a;
}

Event json_to_event(const json& j, const std::string& path) {
    std::string type = need_string(j, "type", path);
    if (type == "handle-slide") {
        EventHandleSlide e;
        e.target = need_string(j, "target", path);
        e.addend = need_string(j, "addend", path);
        e.coeff = static_cast<std::uint32_t>(need_int(j, "coeff", path));
        return e;
    }
    if (type == "birth") {
        EventBirth e;
        e.x.name = need_string(j, "x", path);
        e.y.name = need_string(j, "y", path);
        e.x.degree = static_cast<int>(need_int(j, "x_degree", path));
        e.y.degree = static_cast<int>(need_int(j, "y_degree", path));
        e.unit = j.contains("unit") ? static_cast<std::uint32_t>(j["unit"].get<long long>()) : 1;
        return e;
    }
    if (type == "death") return EventDeath{need_string(j, "x", path), need_string(j, "y", path)};
    if (type == "exit-below") return EventExitBelow{need_string(j, "gen", path)};
    if (type == "exit-above") return EventExitAbove{need_string(j, "gen", path)};
    if (type == "entry-below" || type == "entry-above") {
        std::string gen = need_string(j, "gen", path);
        int degree = static_cast<int>(need_int(j, "degree", path));
        std::map<std::string, std::uint32_t> data;
        const char* field = type == "entry-below" ? "row" : "column";
        if (j.contains(field)) {
            const json& d = j[field];
            if (!d.is_object()) throw parse_error(path + "/" + field, "expected an object");
            for (auto it = d.begin(); it != d.end(); ++it)
                data[it.key()] = static_cast<std::uint32_t>(it.value().get<long long>());
        }
        if (type == "entry-below") return EventEntryBelow{BasisElement{gen, degree, Action()}, data};
        return EventEntryAbove{BasisElement{gen, degree, Action()}, data};
    }
    throw parse_error(path + "/type", "unknown event type '" + type + "'");
}

json event_to_json(const Event& e) {
    json j;
    j["type"] = event_kind_name(e);
    if (const auto* hs = std::get_if<EventHandleSlide>(&e)) {
        j["target"] = hs->target;
        j["addend"] = hs->addend;
        j["coeff"] = hs->coeff;
    } else if (const auto* b = std::get_if<EventBirth>(&e)) {
        j["x"] = b->x.name;
        j["y"] = b->y.name;
        j["x_degree"] = b->x.degree;
        j["y_degree"] = b->y.degree;
        j["unit"] = b->unit;
    } else if (const auto* d = std::get_if<EventDeath>(&e)) {
        j["x"] = d->x;
        j["y"] = d->y;
    } else if (const auto* xb = std::get_if<EventExitBelow>(&e)) {
        j["gen"] = xb->gen;
    } else if (const auto* xa = std::get_if<EventExitAbove>(&e)) {
        j["gen"] = xa->gen;
    } else if (const auto* eb = std::get_if<EventEntryBelow>(&e)) {
        j["gen"] = eb->gen.name;
        j["degree"] = eb->gen.degree;
        json row = json::object();
        for (const auto& [name, c] : eb->row) row[name] = c;
        j["row"] = row;
    } else if (const auto* ea = std::get_if<EventEntryAbove>(&e)) {
        j["gen"] = ea->gen.name;
        j["degree"] = ea->gen.degree;
        json col = json::object();
        for (const auto& [name, c] : ea->column) col[name] = c;
        j["column"] = col;
    }
    return j;
}

} // namespace

PWCScript json_to_script(const json& j) {
    PWCScript s;
    const json& range = need(j, "t_range", "");
    if (!range.is_array() || range.size() != 2) throw parse_error("/t_range", "expected [lo, hi]");
    s.t_lo = need_rational(range[0], "/t_range/0");
    s.t_hi = need_rational(range[1], "/t_range/1");
    s.initial = json_to_complex(need(j, "initial", ""));
    const json& trajs = need(j, "trajectories", "");
    if (!trajs.is_object()) throw parse_error("/trajectories", "expected an object");
    for (auto it = trajs.begin(); it != trajs.end(); ++it)
        s.trajectories[it.key()] = json_to_pl(it.value(), "/trajectories/" + it.key());
    if (j.contains("window_lo")) s.window_lo_traj = json_to_pl(j["window_lo"], "/window_lo");
    if (j.contains("window_hi")) s.window_hi_traj = json_to_pl(j["window_hi"], "/window_hi");
    if (j.contains("events")) {
        const json& evs = j["events"];
        if (!evs.is_array()) throw parse_error("/events", "expected an array");
        std::size_t i = 0;
        for (const auto& e : evs) {
            std::string ep = "/events/" + std::to_string(i++);
            Rat t = need_rational(need(e, "time", ep), ep + "/time");
            s.events.push_back(TimedEvent{t, json_to_event(e, ep)});
        }
    }
    return s;
}

nlohmann::json script_to_json(const PWCScript& script) {
    json j;
    j["kind"] = "pwc_script";
    j["version"] = 1;
    j["t_range"] = json::array({format_rational(script.t_lo), format_rational(script.t_hi)});
    j["initial"] = complex_to_json(script.initial);
    json trajs = json::object();
    for (const auto& [name, f] : script.trajectories) trajs[name] = pl_to_json(f);
    j["trajectories"] = trajs;
    if (script.window_lo_traj) j["window_lo"] = pl_to_json(*script.window_lo_traj);
    if (script.window_hi_traj) j["window_hi"] = pl_to_json(*script.window_hi_traj);
    json evs = json::array();
    for (const auto& te : script.events) {
        json e = event_to_json(te.event);
        e["time"] = format_rational(te.time);
        evs.push_back(e);
    }
    j["events"] = evs;
    return j;
}

OscillationProfile json_to_profile(const json& j) {
    OscillationProfile osc;
    const json& pts = need(j, "integrand", "");
    if (!pts.is_array() || pts.empty()) throw parse_error("/integrand", "expected a nonempty array");
    std::size_t i = 0;
    for (const auto& pt : pts) {
        std::string pp = "/integrand/" + std::to_string(i++);
        if (!pt.is_array() || pt.size() != 2) throw parse_error(pp, "expected [t, value]");
        Rat t = need_rational(pt[0], pp + "/0");
        Rat v = need_rational(pt[1], pp + "/1");
        if (!osc.integrand.points.empty() && !(osc.integrand.points.back().first < t))
            throw parse_error(pp + "/0", "breakpoints must increase strictly");
        osc.integrand.points.emplace_back(t, v);
    }
    auto bad = validate_profile(osc);
    if (!bad.empty()) throw parse_error("/integrand", bad.front());
    return osc;
}

nlohmann::json profile_to_json(const OscillationProfile& osc) {
    json j;
    j["kind"] = "osc_profile";
    j["version"] = 1;
    json pts = json::array();
    for (const auto& [t, v] : osc.integrand.points)
        pts.push_back(json::array({format_rational(t), format_rational(v)}));
    j["integrand"] = pts;
    return j;
}

Augmentation json_to_augmentation(const json& j, const FilteredDGA& dga) {
    if (!j.is_object()) throw parse_error("", "expected an object of generator values");
    Augmentation eps;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!dga.has_generator(it.key()))
            throw parse_error("/" + it.key(), "unknown generator");
        if (!it.value().is_number_integer())
            throw parse_error("/" + it.key(), "expected an integer value");
        long long v = it.value().get<long long>();
        if (v < 0 || v >= dga.field().p())
            throw parse_error("/" + it.key(), "value must lie in 0..p-1");
        eps.values[it.key()] = static_cast<std::uint32_t>(v);
    }
    return eps;
}

nlohmann::json augmentation_to_json(const Augmentation& eps) {
    json j = json::object();
    for (const auto& [name, v] : eps.values) j[name] = v;
    return j;
}

nlohmann::json barcode_to_json(const Barcode& bc) {
    Barcode c = bc;
    c.canonicalize();
    json j;
    j["kind"] = "barcode";
    j["version"] = 1;
    j["window"] = json::array({ext_action_to_json(c.window_lo), ext_action_to_json(c.window_hi)});
    json bars = json::array();
    for (const auto& b : c.bars) {
        json bj;
        bj["degree"] = b.degree;
        bj["start"] = action_to_json(b.start);
        bj["end"] = b.finite() ? action_to_json(b.end.value) : json("inf");
        bars.push_back(bj);
    }
    j["bars"] = bars;
    return j;
}

BoundsInput json_to_bounds_input(const json& j) {
    BoundsInput in;
    if (j.contains("main_theorem")) {
        const json& m = j["main_theorem"];
        BoundsInput::MainTheorem mt;
        const json& betti = need(m, "betti", "/main_theorem");
        if (!betti.is_array()) throw parse_error("/main_theorem/betti", "expected an array");
        for (const auto& b : betti) {
            if (!b.is_number_integer())
                throw parse_error("/main_theorem/betti", "expected integers");
            mt.betti.push_back(b.get<long long>());
        }
        mt.k = static_cast<std::size_t>(need_int(m, "k", "/main_theorem"));
        mt.osc = need_rational(need(m, "osc", "/main_theorem"), "/main_theorem/osc");
        const json& s = need(m, "spectrum", "/main_theorem");
        const json& lengths = need(s, "lengths", "/main_theorem/spectrum");
        if (!lengths.is_array())
            throw parse_error("/main_theorem/spectrum/lengths", "expected an array");
        for (const auto& l : lengths)
            mt.spectrum.lengths.push_back(need_rational(l, "/main_theorem/spectrum/lengths"));
        if (s.contains("level"))
            mt.spectrum.level = json_to_ext_action(s["level"], "/main_theorem/spectrum/level");
        if (s.contains("hbar"))
            mt.spectrum.hbar = json_to_ext_action(s["hbar"], "/main_theorem/spectrum/hbar");
        in.main_theorem = std::move(mt);
    }
    if (j.contains("scf")) {
        const json& m = j["scf"];
        BoundsInput::Scf scf;
        const json& values = need(m, "values", "/scf");
        if (!values.is_array()) throw parse_error("/scf/values", "expected an array");
        for (const auto& v : values) scf.values.push_back(need_rational(v, "/scf/values"));
        scf.eps = need_rational(need(m, "eps", "/scf"), "/scf/eps");
        in.scf = std::move(scf);
    }
    if (j.contains("growth")) {
        const json& m = j["growth"];
        BoundsInput::Growth g;
        g.delta = need_rational(need(m, "delta", "/growth"), "/growth/delta");
        const json& pairs = need(m, "pairs", "/growth");
        if (!pairs.is_array()) throw parse_error("/growth/pairs", "expected an array");
        for (const auto& pr : pairs) {
            if (!pr.is_array() || pr.size() != 2)
                throw parse_error("/growth/pairs", "expected [in, out] pairs");
            g.pairs.emplace_back(need_rational(pr[0], "/growth/pairs"),
                                 need_rational(pr[1], "/growth/pairs"));
        }
        in.growth = std::move(g);
    }
    if (j.contains("trace")) {
        const json& m = j["trace"];
        ConformalProfile t;
        t.f_min = need_rational(need(m, "f_min", "/trace"), "/trace/f_min");
        t.f_max = need_rational(need(m, "f_max", "/trace"), "/trace/f_max");
        t.eps = need_rational(need(m, "eps", "/trace"), "/trace/eps");
        in.trace = t;
    }
    return in;
}

Document parse_document(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error("", std::string("not valid JSON: ") + e.what());
    }
    Document doc;
    doc.kind = need_string(j, "kind", "");
    long long version = need_int(j, "version", "");
    if (version != 1) throw parse_error("/version", "unsupported version");
    doc.version = static_cast<int>(version);
    doc.payload = j;
    // structural validation by round-tripping through the typed reader
    if (doc.kind == "dga" || doc.kind == "link_dga") json_to_dga(j);
    else if (doc.kind == "complex") json_to_complex(j);
    else if (doc.kind == "counts") json_to_counts(j);
    else if (doc.kind == "pwc_script") json_to_script(j);
    else if (doc.kind == "osc_profile") json_to_profile(j);
    else if (doc.kind == "bounds_input") json_to_bounds_input(j);
    else if (doc.kind == "barcode") { /* output-only document */ }
    else throw parse_error("/kind", "unknown document kind '" + doc.kind + "'");
    return doc;
}

std::string canonical_dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

std::string serialize_document(const Document& doc) {
    // canonical form: re-emit through the typed writer
    if (doc.kind == "dga" || doc.kind == "link_dga")
        return canonical_dump(dga_to_json(json_to_dga(doc.payload), doc.kind));
    if (doc.kind == "complex") return canonical_dump(complex_to_json(json_to_complex(doc.payload)));
    if (doc.kind == "counts") return canonical_dump(counts_to_json(json_to_counts(doc.payload)));
    if (doc.kind == "pwc_script") return canonical_dump(script_to_json(json_to_script(doc.payload)));
    if (doc.kind == "osc_profile")
        return canonical_dump(profile_to_json(json_to_profile(doc.payload)));
    return canonical_dump(doc.payload);
}

std::string barcode_to_svg(const Barcode& bc) {
    Barcode c = bc;
    c.canonicalize();
    // x range from the finite endpoints (fall back to [0,1])
    double lo = 0, hi = 1;
    bool seen = false;
    auto see = [&](double v) {
        if (!seen) {
            lo = hi = v;
            seen = true;
        } else {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    };
    for (const auto& b : c.bars) {
        see(action_to_double(b.start));
        if (b.finite()) see(action_to_double(b.end.value));
    }
    if (c.window_lo.finite()) see(ext_action_to_double(c.window_lo));
    if (c.window_hi.finite()) see(ext_action_to_double(c.window_hi));
    if (!seen || hi == lo) hi = lo + 1;

    const double width = 640, row = 18, margin = 40;
    double height = margin * 2 + row * static_cast<double>(std::max<std::size_t>(c.bars.size(), 1));
    auto xpos = [&](double v) { return margin + (v - lo) / (hi - lo) * (width - 2 * margin); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\">\n";
    svg << "  <line x1=\"" << margin << "\" y1=\"" << height - margin / 2 << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin / 2
        << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
    std::size_t i = 0;
    for (const auto& b : c.bars) {
        double y = margin + row * static_cast<double>(i++);
        double x0 = xpos(action_to_double(b.start));
        double x1 = b.finite() ? xpos(action_to_double(b.end.value)) : width - margin;
        svg << "  <line x1=\"" << x0 << "\" y1=\"" << y << "\" x2=\"" << x1 << "\" y2=\"" << y
            << "\" stroke=\"#1f6fb2\" stroke-width=\"4\"/>\n";
        if (!b.finite())
            svg << "  <path d=\"M " << x1 << " " << y - 5 << " L " << x1 + 8 << " " << y << " L "
                << x1 << " " << y + 5 << " Z\" fill=\"#1f6fb2\"/>\n";
        svg << "  <text x=\"" << margin / 4 << "\" y=\"" << y + 4 << "\" font-size=\"10\">deg "
            << b.degree << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace rfcone
