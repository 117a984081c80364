#include "rfcone/pwc.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace rfcone {

Action PLFunction::at(const Rat& t) const {
    if (points.empty()) throw domain_error("empty trajectory");
    if (t <= points.front().first) return points.front().second;
    if (t >= points.back().first) return points.back().second;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (t > points[i].first) continue;
        const auto& [t0, v0] = points[i - 1];
        const auto& [t1, v1] = points[i];
        Rat s = (t - t0) / (t1 - t0);
        return v0 + (v1 - v0) * s;
    }
    return points.back().second;
}

PLFunction PLFunction::constant(const Action& v) { return PLFunction{{{Rat(0), v}}}; }

PLFunction PLFunction::segment(const Rat& t0, const Action& v0, const Rat& t1, const Action& v1) {
    return PLFunction{{{t0, v0}, {t1, v1}}};
}

Rat PLRatFunction::at(const Rat& t) const {
    if (points.empty()) throw domain_error("empty rate function");
    if (t <= points.front().first) return points.front().second;
    if (t >= points.back().first) return points.back().second;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (t > points[i].first) continue;
        const auto& [t0, v0] = points[i - 1];
        const auto& [t1, v1] = points[i];
        return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
    return points.back().second;
}

Rat PLRatFunction::integral(const Rat& t0, const Rat& t1) const {
    if (t1 < t0) throw domain_error("integral bounds out of order");
    // trapezoid over the breakpoints clipped to [t0, t1]
    std::vector<Rat> cuts{t0, t1};
    for (const auto& [t, v] : points) {
        (void)v;
        if (t > t0 && t < t1) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    Rat total = 0;
    for (std::size_t i = 1; i < cuts.size(); ++i)
        total += (at(cuts[i - 1]) + at(cuts[i])) * (cuts[i] - cuts[i - 1]) / 2;
    return total;
}

PLRatFunction PLRatFunction::constant(const Rat& v) { return PLRatFunction{{{Rat(0), v}}}; }

namespace {

// times where some piecewise-linear data changes slope, inside [lo, hi]
std::vector<Rat> critical_times(const PWCScript& script) {
    std::set<Rat> ts{script.t_lo, script.t_hi};
    auto add_pl = [&](const PLFunction& f) {
        for (const auto& [t, v] : f.points) {
            (void)v;
            if (t > script.t_lo && t < script.t_hi) ts.insert(t);
        }
    };
    for (const auto& [name, f] : script.trajectories) {
        (void)name;
        add_pl(f);
    }
    if (script.window_lo_traj) add_pl(*script.window_lo_traj);
    if (script.window_hi_traj) add_pl(*script.window_hi_traj);
    for (const auto& e : script.events)
        if (e.time > script.t_lo && e.time < script.t_hi) ts.insert(e.time);
    return {ts.begin(), ts.end()};
}

ExtAction window_lo_at(const PWCScript& script, const Rat& t) {
    if (script.window_lo_traj) return ExtAction(script.window_lo_traj->at(t));
    return script.initial.window_lo;
}

ExtAction window_hi_at(const PWCScript& script, const Rat& t) {
    if (script.window_hi_traj) return ExtAction(script.window_hi_traj->at(t));
    return script.initial.window_hi;
}

void drift_to(const PWCScript& script, FilteredComplex& c, const Rat& t) {
    for (auto& b : c.basis) {
        auto it = script.trajectories.find(b.name);
        if (it == script.trajectories.end())
            throw domain_error("no trajectory for generator '" + b.name + "'");
        b.action = it->second.at(t);
    }
    c.window_lo = window_lo_at(script, t);
    c.window_hi = window_hi_at(script, t);
}

// Event payload actions are refreshed from the trajectories at event time.
Event instantiate_event(const PWCScript& script, const Event& e, const Rat& t) {
    Event out = e;
    auto traj_action = [&](const std::string& name) {
        auto it = script.trajectories.find(name);
        if (it == script.trajectories.end())
            throw domain_error("no trajectory for generator '" + name + "'");
        return it->second.at(t);
    };
    if (auto* b = std::get_if<EventBirth>(&out)) {
        b->x.action = traj_action(b->x.name);
        b->y.action = traj_action(b->y.name);
    } else if (auto* en = std::get_if<EventEntryBelow>(&out)) {
        en->gen.action = traj_action(en->gen.name);
    } else if (auto* en = std::get_if<EventEntryAbove>(&out)) {
        en->gen.action = traj_action(en->gen.name);
    }
    return out;
}

} // namespace

std::vector<std::string> validate_script(const PWCScript& script) {
    std::vector<std::string> v;
    try {
        evolve(script);
    } catch (const domain_error& e) {
        v.push_back(e.what());
    }
    return v;
}

std::vector<Frame> evolve(const PWCScript& script, const std::vector<Rat>& samples) {
    if (!(script.t_lo < script.t_hi)) throw domain_error("script time range is empty");
    for (std::size_t i = 1; i < script.events.size(); ++i)
        if (!(script.events[i - 1].time < script.events[i].time))
            throw domain_error("event times must be strictly increasing and distinct");
    for (const auto& e : script.events)
        if (e.time <= script.t_lo || e.time >= script.t_hi)
            throw domain_error("event time outside the open time range");

    // probe times: critical times plus midpoints of consecutive pairs
    std::vector<Rat> crit = critical_times(script);
    std::set<Rat> probe_set(crit.begin(), crit.end());
    for (std::size_t i = 1; i < crit.size(); ++i) probe_set.insert((crit[i - 1] + crit[i]) / 2);
    for (const auto& s : samples) {
        if (s < script.t_lo || s > script.t_hi) throw domain_error("sample time outside range");
        probe_set.insert(s);
    }
    std::set<Rat> event_times;
    for (const auto& e : script.events) event_times.insert(e.time);

    std::set<Rat> frame_times(samples.begin(), samples.end());
    frame_times.insert(script.t_lo);
    frame_times.insert(script.t_hi);
    for (const auto& t : event_times) frame_times.insert(t);

    FilteredComplex cur = script.initial;
    drift_to(script, cur, script.t_lo);
    require_valid(cur);
    Barcode bc = compute_barcode(cur);

    std::vector<Frame> frames;
    std::size_t next_event = 0;
    for (const Rat& t : probe_set) {
        drift_to(script, cur, t);
        bool is_event = event_times.count(t) > 0;
        // window membership is not enforced at the event instant itself,
        // where an entering or exiting generator touches the boundary
        {
            FilteredComplex probe = cur;
            if (is_event) {
                probe.window_lo = ExtAction::neg_inf();
                probe.window_hi = ExtAction::pos_inf();
            }
            auto bad = validate_complex(probe);
            if (!bad.empty())
                throw domain_error("script invalid at t = " + format_rational(t) + ": " + bad.front());
        }
        bc = compute_barcode(cur);
        if (is_event) {
            while (next_event < script.events.size() && script.events[next_event].time == t) {
                Event ev = instantiate_event(script, script.events[next_event].event, t);
                auto [nbc, nc] = apply_event(bc, cur, ev);
                bc = std::move(nbc);
                cur = std::move(nc);
                ++next_event;
            }
        }
        if (frame_times.count(t)) frames.push_back(Frame{t, cur, bc});
    }
    return frames;
}

std::vector<std::string> validate_profile(const OscillationProfile& osc) {
    std::vector<std::string> v;
    if (osc.integrand.points.empty()) {
        v.push_back("empty oscillation integrand");
        return v;
    }
    for (std::size_t i = 1; i < osc.integrand.points.size(); ++i)
        if (!(osc.integrand.points[i - 1].first < osc.integrand.points[i].first))
            v.push_back("integrand breakpoints out of order");
    for (const auto& [t, val] : osc.integrand.points)
        if (val < 0) v.push_back("oscillation integrand negative at t = " + format_rational(t));
    return v;
}

AdmissibilityVerdict check_window_admissibility(const PWCScript& script,
                                                const OscillationProfile& osc, const Rat& l) {
    AdmissibilityVerdict v;
    auto bad = validate_profile(osc);
    if (!bad.empty()) {
        v.message = bad.front();
        return v;
    }
    if (!script.window_lo_traj || !script.window_hi_traj) {
        v.message = "admissibility check needs finite window trajectories";
        return v;
    }

    // margin(t) = (l - l(t)) - (b_t - a_t); piecewise quadratic, and the
    // width itself must stay positive
    std::vector<Rat> cuts;
    {
        std::set<Rat> s{script.t_lo, script.t_hi};
        for (const auto& [t, val] : osc.integrand.points) {
            (void)val;
            if (t > script.t_lo && t < script.t_hi) s.insert(t);
        }
        for (const auto& [t, val] : script.window_lo_traj->points) {
            (void)val;
            if (t > script.t_lo && t < script.t_hi) s.insert(t);
        }
        for (const auto& [t, val] : script.window_hi_traj->points) {
            (void)val;
            if (t > script.t_lo && t < script.t_hi) s.insert(t);
        }
        cuts.assign(s.begin(), s.end());
    }

    auto width_at = [&](const Rat& t) -> Action {
        return script.window_hi_traj->at(t) - script.window_lo_traj->at(t);
    };

    Rat running = 0; // l(segment start)
    for (std::size_t seg = 1; seg < cuts.size(); ++seg) {
        const Rat& s0 = cuts[seg - 1];
        const Rat& s1 = cuts[seg];
        Action w0 = width_at(s0), w1 = width_at(s1);
        if (action_sign(w0) <= 0 || action_sign(w1) <= 0) {
            v.first_violation = action_sign(w0) <= 0 ? s0 : s1;
            v.violation_time_exact = true;
            v.message = "window width is not positive";
            return v;
        }
        Rat o0 = osc.integrand.at(s0), o1 = osc.integrand.at(s1);
        Rat h = s1 - s0;
        // In the parameter u = (t - s0)/h on [0,1]:
        //   l(t)   = running + h (o0 u + (o1 - o0) u^2 / 2)
        //   width  = w0 + (w1 - w0) u
        //   margin = l - l(t) - width = A u^2 + (Br + Bpi*pi) u + (Cr + Cpi*pi)
        Rat A = -h * (o1 - o0) / 2;
        Rat Br = -h * o0 - (w1.c - w0.c);
        Rat Bpi = -(w1.pi - w0.pi);
        Rat Cr = l - running - w0.c;
        Rat Cpi = -w0.pi;

        auto margin_at = [&](const Rat& u) -> Action {
            return Action(Bpi * u + Cpi, A * u * u + Br * u + Cr);
        };
        auto report = [&](const Rat& u, bool exact) {
            v.first_violation = s0 + u * h;
            v.violation_time_exact = exact;
            v.message = "window width reaches l - l(t)";
        };

        if (action_sign(margin_at(0)) <= 0) {
            report(0, true);
            return v;
        }
        bool end_viol = action_sign(margin_at(1)) <= 0;

        if (Bpi == 0 && Cpi == 0) {
            // rational margin: exact root analysis
            auto first_root_leq = [&]() -> std::optional<std::pair<Rat, bool>> {
                if (A == 0) {
                    if (Br >= 0) return std::nullopt;     // nondecreasing, margin(0) > 0
                    Rat u = -Cr / Br;                     // first crossing of the line
                    if (u <= 1) return std::make_pair(u, true);
                    return std::nullopt;
                }
                Rat disc = Br * Br - 4 * A * Cr;
                if (disc < 0) return std::nullopt;
                Rat sq;
                if (rat_sqrt(disc, &sq)) {
                    Rat r1 = (-Br - sq) / (2 * A), r2 = (-Br + sq) / (2 * A);
                    if (r1 > r2) std::swap(r1, r2);
                    if (r1 > 0 && r1 <= 1) return std::make_pair(r1, true);
                    if (r2 > 0 && r2 <= 1) return std::make_pair(r2, true);
                    return std::nullopt;
                }
                // irrational roots: locate a witness below zero
                if (end_viol) { // sign change in (0,1]
                    Rat lo = 0, hi = 1;
                    for (int it = 0; it < 80; ++it) {
                        Rat mid = (lo + hi) / 2;
                        if (margin_at(mid).c <= 0) hi = mid;
                        else lo = mid;
                    }
                    return std::make_pair(hi, false);
                }
                if (A > 0) { // interior dip at the rational vertex
                    Rat vertex = -Br / (2 * A);
                    if (vertex > 0 && vertex < 1 && margin_at(vertex).c <= 0)
                        return std::make_pair(vertex, false);
                }
                return std::nullopt;
            };
            if (auto r = first_root_leq()) {
                report(r->first, r->second);
                return v;
            }
        } else {
            // pi-linear margin: probe the endpoints and the stationary point
            // enclosure, then certify positivity with interval arithmetic
            if (end_viol) {
                Rat lo = 0, hi = 1;
                for (int it = 0; it < 200; ++it) {
                    Rat mid = (lo + hi) / 2;
                    if (action_sign(margin_at(mid)) <= 0) hi = mid;
                    else lo = mid;
                }
                report(hi, false);
                return v;
            }
            if (A != 0) {
                // margin'(u) = 2A u + Br + Bpi pi = 0
                Rat ua = (-Br - Bpi * pi_enclosure_lo()) / (2 * A);
                Rat ub = (-Br - Bpi * pi_enclosure_hi()) / (2 * A);
                if (ua > ub) std::swap(ua, ub);
                if (ub > 0 && ua < 1) {
                    Rat plo = std::max(ua, Rat(0)), phi = std::min(ub, Rat(1));
                    Rat probe = (plo + phi) / 2;
                    if (action_sign(margin_at(probe)) <= 0) {
                        report(probe, false);
                        return v;
                    }
                    // interval lower bound of margin over [plo, phi] x [pi_lo, pi_hi]
                    auto min_term = [](const Rat& coef, const Rat& xlo, const Rat& xhi) {
                        return coef >= 0 ? coef * xlo : coef * xhi;
                    };
                    Rat lower = min_term(A, plo * plo, phi * phi); // u >= 0 on the segment
                    lower += min_term(Br, plo, phi);
                    Rat bp_lo = std::min(Bpi * pi_enclosure_lo(), Bpi * pi_enclosure_hi());
                    lower += min_term(bp_lo, plo, phi);
                    lower += Cr + std::min(Cpi * pi_enclosure_lo(), Cpi * pi_enclosure_hi());
                    if (lower <= 0)
                        throw domain_error(
                            "window admissibility undecidable at enclosure precision");
                }
            }
        }
        running += osc.integrand.integral(s0, s1);
    }
    v.admissible = true;
    return v;
}

SpeedLawVerdict check_speed_law(const PWCScript& script, const OscillationProfile& osc,
                                const std::vector<std::string>& pure) {
    SpeedLawVerdict verdict;
    auto bad = validate_profile(osc);
    if (!bad.empty()) {
        verdict.violations = bad;
        return verdict;
    }
    std::vector<Rat> cuts = critical_times(script);
    {
        std::set<Rat> s(cuts.begin(), cuts.end());
        for (const auto& [t, val] : osc.integrand.points) {
            (void)val;
            if (t > script.t_lo && t < script.t_hi) s.insert(t);
        }
        cuts.assign(s.begin(), s.end());
    }
    std::vector<std::pair<std::string, const PLFunction*>> trajs;
    for (const auto& [name, f] : script.trajectories) trajs.emplace_back(name, &f);

    // |slope| <= osc rate checked at segment endpoints (all linear there)
    auto segment_ok = [&](const Action& v0, const Action& v1, const Rat& s0, const Rat& s1) {
        Action rise = v1 - v0;
        Rat h = s1 - s0;
        Action lo_bound = Action(-osc.integrand.at(s0) * h);
        Action hi_bound = Action(osc.integrand.at(s0) * h);
        Action lo_bound1 = Action(-osc.integrand.at(s1) * h);
        Action hi_bound1 = Action(osc.integrand.at(s1) * h);
        // rise must fit under both endpoint rates (the rate is linear in t)
        return !(hi_bound < rise) && !(rise < lo_bound) && !(hi_bound1 < rise) &&
               !(rise < lo_bound1);
    };

    for (std::size_t seg = 1; seg < cuts.size(); ++seg) {
        const Rat& s0 = cuts[seg - 1];
        const Rat& s1 = cuts[seg];
        for (std::size_t a = 0; a < trajs.size(); ++a)
            for (std::size_t b = a + 1; b < trajs.size(); ++b) {
                Action d0 = trajs[a].second->at(s0) - trajs[b].second->at(s0);
                Action d1 = trajs[a].second->at(s1) - trajs[b].second->at(s1);
                if (!segment_ok(d0, d1, s0, s1))
                    verdict.violations.push_back(
                        "relative drift of ('" + trajs[a].first + "','" + trajs[b].first +
                        "') exceeds the oscillation rate on [" + format_rational(s0) + "," +
                        format_rational(s1) + "]");
            }
        for (const auto& name : pure) {
            auto it = script.trajectories.find(name);
            if (it == script.trajectories.end()) {
                verdict.violations.push_back("no trajectory for pure chord '" + name + "'");
                continue;
            }
            Action v0 = it->second.at(s0), v1 = it->second.at(s1);
            if (!segment_ok(v0, v1, s0, s1))
                verdict.violations.push_back("pure chord '" + name +
                                             "' drifts faster than the oscillation rate on [" +
                                             format_rational(s0) + "," + format_rational(s1) + "]");
        }
    }
    // endpoint-to-endpoint bound for pure chords
    Rat total = osc.total(script.t_lo, script.t_hi);
    for (const auto& name : pure) {
        auto it = script.trajectories.find(name);
        if (it == script.trajectories.end()) continue;
        Action drift = it->second.at(script.t_hi) - it->second.at(script.t_lo);
        if (Action(total) < drift || drift < Action(-total))
            verdict.violations.push_back("pure chord '" + name +
                                         "' total drift exceeds the oscillation norm");
    }
    verdict.ok = verdict.violations.empty();
    return verdict;
}

namespace {

std::vector<Rat> merged_breakpoints(const NormProfiles& n) {
    std::set<Rat> ts;
    for (const auto& [t, v] : n.max_h.points) {
        (void)v;
        ts.insert(t);
    }
    for (const auto& [t, v] : n.min_h.points) {
        (void)v;
        ts.insert(t);
    }
    return {ts.begin(), ts.end()};
}

} // namespace

OscillationProfile osc_profile(const NormProfiles& n) {
    OscillationProfile osc;
    for (const Rat& t : merged_breakpoints(n))
        osc.integrand.points.emplace_back(t, n.max_h.at(t) - n.min_h.at(t));
    return osc;
}

OscillationProfile l1_profile(const NormProfiles& n) {
    OscillationProfile osc;
    for (const Rat& t : merged_breakpoints(n)) osc.integrand.points.emplace_back(t, n.max_h.at(t));
    return osc;
}

AdmissibilityVerdict check_window_admissibility_l2(const PWCScript& script, const NormProfiles& n,
                                                   const Rat& l) {
    if (n.conformal_max_abs < 0) {
        AdmissibilityVerdict v;
        v.message = "conformal offset must be nonnegative";
        return v;
    }
    return check_window_admissibility(script, osc_profile(n), l - n.conformal_max_abs);
}

std::vector<std::string> check_norm_domination(const NormProfiles& n) {
    std::vector<std::string> v;
    for (const Rat& t : merged_breakpoints(n)) {
        if (n.min_h.at(t) > 0)
            v.push_back("min H > 0 at t = " + format_rational(t) + ": l <= l1 can fail");
        if (n.max_h.at(t) < n.min_h.at(t))
            v.push_back("max H < min H at t = " + format_rational(t));
    }
    if (n.conformal_max_abs < 0) v.push_back("conformal offset must be nonnegative");
    return v;
}

PWCScript assemble_pwc_from_equivalences(const std::vector<FilteredComplex>& grid,
                                         const std::vector<GridStep>& steps) {
    if (grid.size() < 2) throw domain_error("grid needs at least two complexes");
    if (steps.size() != grid.size() - 1) throw domain_error("need one step per grid interval");
    const std::size_t n_steps = steps.size();

    // verify each step through the corresponding lemma checker
    for (std::size_t i = 0; i < n_steps; ++i) {
        const GridStep& st = steps[i];
        switch (st.kind) {
        case GridStep::Simple: {
            Verdict v = check_simple_equivalence(grid[i], grid[i + 1], st.cert, st.delta);
            if (!v.hypotheses_ok || !v.confirmed)
                throw domain_error("grid step " + std::to_string(i) + " fails its hypothesis: " +
                                   (v.messages.empty() ? "unconfirmed" : v.messages.front()));
            break;
        }
        case GridStep::Birth: {
            BirthDeathVerdict v =
                check_birth_death_shape(grid[i + 1], grid[i], st.bd_a, st.delta, st.cert);
            if (!v.hypotheses_ok || !v.confirmed)
                throw domain_error("grid step " + std::to_string(i) + " fails its hypothesis: " +
                                   (v.messages.empty() ? "unconfirmed" : v.messages.front()));
            break;
        }
        case GridStep::Death: {
            BirthDeathVerdict v =
                check_birth_death_shape(grid[i], grid[i + 1], st.bd_a, st.delta, st.cert);
            if (!v.hypotheses_ok || !v.confirmed)
                throw domain_error("grid step " + std::to_string(i) + " fails its hypothesis: " +
                                   (v.messages.empty() ? "unconfirmed" : v.messages.front()));
            break;
        }
        }
    }

    PWCScript script;
    script.t_lo = 0;
    script.t_hi = 1;
    script.initial = grid.front();

    // alive[i] = set of names present in grid[i]
    auto grid_time = [&](std::size_t i) { return Rat(static_cast<long long>(i), n_steps); };

    // trajectories: linear between grid values while alive, constant at the
    // boundary values around births and deaths
    std::map<std::string, PLFunction> trajs;
    for (std::size_t i = 0; i <= n_steps; ++i)
        for (const auto& b : grid[i].basis) {
            auto& f = trajs[b.name];
            Rat t = grid_time(i);
            if (f.points.empty() || f.points.back().first < t) f.points.emplace_back(t, b.action);
        }
    script.trajectories = std::move(trajs);

    for (std::size_t i = 0; i < n_steps; ++i) {
        const GridStep& st = steps[i];
        Rat mid = (grid_time(i) + grid_time(i + 1)) / 2;
        if (st.kind == GridStep::Birth) {
            const auto& target = grid[i + 1];
            EventBirth ev;
            ev.x = BasisElement{st.bd_x, target.basis[target.index_of(st.bd_x)].degree,
                                target.basis[target.index_of(st.bd_x)].action};
            ev.y = BasisElement{st.bd_y, target.basis[target.index_of(st.bd_y)].degree,
                                target.basis[target.index_of(st.bd_y)].action};
            ev.unit = target.differential.at(target.index_of(st.bd_y), target.index_of(st.bd_x));
            if (!ev.unit) ev.unit = 1;
            // hold the target action back to the birth time
            for (const auto& name : {st.bd_x, st.bd_y}) {
                auto& f = script.trajectories[name];
                Action v = (name == st.bd_x) ? ev.x.action : ev.y.action;
                if (f.points.empty()) f.points = {{mid, v}, {grid_time(i + 1), v}};
                else if (mid < f.points.front().first)
                    f.points.insert(f.points.begin(), {mid, f.points.front().second});
            }
            script.events.push_back(TimedEvent{mid, ev});
        } else if (st.kind == GridStep::Death) {
            script.events.push_back(TimedEvent{mid, EventDeath{st.bd_x, st.bd_y}});
        }
    }
    std::sort(script.events.begin(), script.events.end(),
              [](const TimedEvent& a, const TimedEvent& b) { return a.time < b.time; });

    // the construction is one witness; reject it if its grid-time barcodes
    // disagree with the grid data
    std::vector<Rat> sample_times;
    for (std::size_t i = 0; i <= n_steps; ++i) sample_times.push_back(grid_time(i));
    std::vector<Frame> frames = evolve(script, sample_times);
    for (std::size_t i = 0; i <= n_steps; ++i) {
        Barcode expect = compute_barcode(grid[i]);
        const Frame* fr = nullptr;
        for (const auto& f : frames)
            if (f.t == grid_time(i)) fr = &f;
        if (!fr) throw domain_error("assembled script lost a grid frame");
        if (!same_bar_multiset(fr->barcode, expect))
            throw domain_error("assembled script's barcode at grid time " +
                               format_rational(grid_time(i)) + " disagrees with the grid complex");
    }
    return script;
}

} // namespace rfcone
