#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rfcone/io.hpp"
#include "rfcone/transform.hpp"

using namespace rfcone;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw domain_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Output {
    std::string format = "text"; // text, json, svg
};

void emit_barcode(const Barcode& bc, const Output& out) {
    if (out.format == "json") std::cout << canonical_dump(barcode_to_json(bc));
    else if (out.format == "svg") std::cout << barcode_to_svg(bc);
    else std::cout << barcode_to_string(bc);
}

std::pair<ExtAction, ExtAction> parse_window(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos) throw domain_error("window must be 'lo,hi'");
    auto parse_side = [](const std::string& t) -> ExtAction {
        if (t == "inf" || t == "+inf") return ExtAction::pos_inf();
        if (t == "-inf") return ExtAction::neg_inf();
        auto star = t.find("pi");
        if (star != std::string::npos) {
            // "q*pi+r" style input is not supported on the command line
            throw domain_error("pi-linear window bounds belong in document files");
        }
        return ExtAction(Action(parse_rational(t)));
    };
    return {parse_side(s.substr(0, comma)), parse_side(s.substr(comma + 1))};
}

std::vector<Rat> parse_rat_list(const std::string& s) {
    std::vector<Rat> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_rational(item));
    return out;
}

std::vector<long long> parse_int_list(const std::string& s) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
    return out;
}

int run_cli(int argc, char** argv) {
    CLI::App app{"filtered DGA, barcode and Rabinowitz cone toolkit"};
    app.require_subcommand(1);
    Output out;
    app.add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"text", "json", "svg"}));
    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "seed for randomized suites (recorded, deterministic)");
    std::uint32_t field_flag = 0;
    app.add_option("--field", field_flag, "expected coefficient field characteristic");

    // validate
    std::string validate_file;
    auto* validate = app.add_subcommand("validate", "validate a document file");
    validate->add_option("file", validate_file)->required();

    // augment
    std::string augment_file;
    std::uint64_t augment_max = 1 << 20;
    auto* augment = app.add_subcommand("augment", "enumerate augmentations of a DGA");
    augment->add_option("file", augment_file)->required();
    augment->add_option("--max", augment_max, "candidate cap");

    // linearize
    std::string lin_file, lin_aug_file;
    long long lin_aug_index = -1;
    auto* lin = app.add_subcommand("linearize", "linearized complex of a DGA with an augmentation");
    lin->add_option("file", lin_file)->required();
    lin->add_option("--aug-file", lin_aug_file, "augmentation JSON file");
    lin->add_option("--aug-index", lin_aug_index, "index into the enumerated augmentations");

    // cone
    std::string cone_link, cone_counts, cone_aug, cone_window;
    int cone_n = 1, cone_modulus = 0;
    auto* cone = app.add_subcommand("cone", "assemble a Rabinowitz cone from link data");
    cone->add_option("--link", cone_link)->required();
    cone->add_option("--counts", cone_counts, "two-positive-puncture counts file");
    cone->add_option("--aug-file", cone_aug, "augmentation for the pure chords");
    cone->add_option("--window", cone_window, "action window lo,hi")->required();
    cone->add_option("--n", cone_n, "ambient parameter n")->required();
    cone->add_option("--grading-modulus", cone_modulus);

    // barcode
    std::string barcode_file, barcode_window;
    auto* barcode_cmd = app.add_subcommand("barcode", "barcode of a filtered complex");
    barcode_cmd->add_option("file", barcode_file)->required();
    barcode_cmd->add_option("--window", barcode_window, "restrict to a window lo,hi");

    // evolve
    std::string evolve_file, evolve_samples;
    auto* evolve_cmd = app.add_subcommand("evolve", "run a piecewise-continuous script");
    evolve_cmd->add_option("file", evolve_file)->required();
    evolve_cmd->add_option("--samples", evolve_samples, "comma-separated sample times");

    // grade
    auto* grade = app.add_subcommand("grade", "index calculators");
    std::string grade_kind;
    int g_n = 1, g_mu = 0, g_c1 = 0, g_cz = 0, g_maslov = 0, g_bott = 0, g_morse = 0, g_j = 1;
    long long g_k = 0;
    bool g_perturbed = false;
    std::string g_eps;
    grade->add_option("kind", grade_kind)->required()->check(CLI::IsMember({"plane", "halfplane", "mixed"}));
    grade->add_option("--n", g_n);
    grade->add_option("--mu-cz", g_mu);
    grade->add_option("--c1rel", g_c1);
    grade->add_option("--cz", g_cz);
    grade->add_option("--maslov", g_maslov);
    grade->add_option("--bott-dim", g_bott);
    grade->add_option("--morse-index", g_morse);
    grade->add_flag("--perturbed", g_perturbed);
    grade->add_option("--j", g_j);
    grade->add_option("--k", g_k);
    grade->add_option("--epsilon", g_eps);

    // rpn
    auto* rpn = app.add_subcommand("rpn", "projective-space Rabinowitz complex");
    int rpn_n = 1;
    std::string rpn_window, rpn_eps, rpn_emit = "all";
    rpn->add_option("--n", rpn_n)->required();
    rpn->add_option("--window", rpn_window)->required();
    rpn->add_option("--epsilon", rpn_eps);
    rpn->add_option("--emit", rpn_emit)->check(CLI::IsMember({"rfc", "barcode", "script", "all"}));

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "quantitative bounds");
    bounds_cmd->require_subcommand(1);
    std::string bounds_input_file;
    bounds_cmd->add_option("--input", bounds_input_file, "bounds_input document file");
    auto* bt = bounds_cmd->add_subcommand("main-theorem", "chord-count lower bound");
    std::string bt_betti, bt_osc, bt_spectrum, bt_level = "inf", bt_hbar = "inf";
    std::size_t bt_k = 1;
    bt->add_option("--betti", bt_betti);
    bt->add_option("--k", bt_k);
    bt->add_option("--osc", bt_osc);
    bt->add_option("--spectrum", bt_spectrum);
    bt->add_option("--level", bt_level);
    bt->add_option("--hbar", bt_hbar);
    auto* scf = bounds_cmd->add_subcommand("scf", "displacement energy constant");
    std::string scf_values, scf_eps;
    scf->add_option("--values", scf_values);
    scf->add_option("--eps", scf_eps);
    auto* growth = bounds_cmd->add_subcommand("growth", "action growth check");
    std::string growth_pairs, growth_delta;
    growth->add_option("--pairs", growth_pairs, "in:out,in:out,...");
    growth->add_option("--delta", growth_delta);
    auto* trace = bounds_cmd->add_subcommand("trace", "trace cobordism lengths");
    std::string tr_fmin, tr_fmax, tr_eps;
    trace->add_option("--f-min", tr_fmin);
    trace->add_option("--f-max", tr_fmax);
    trace->add_option("--eps", tr_eps);

    // destab
    std::string destab_file, destab_x, destab_y;
    auto* destab = app.add_subcommand("destab", "destabilize an acyclic pair");
    destab->add_option("file", destab_file)->required();
    destab->add_option("--x", destab_x)->required();
    destab->add_option("--y", destab_y)->required();

    for (auto* sc : app.get_subcommands(nullptr)) {
        sc->fallthrough();
        for (auto* nested : sc->get_subcommands(nullptr)) nested->fallthrough();
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // 0
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    (void)seed;
    auto require_field = [&](std::uint32_t actual) {
        if (field_flag != 0 && field_flag != actual)
            throw domain_error("--field " + std::to_string(field_flag) +
                               " conflicts with the data's characteristic " +
                               std::to_string(actual));
    };

    if (*validate) {
        Document doc = parse_document(slurp(validate_file));
        std::vector<std::string> problems;
        if (doc.kind == "dga") problems = validate_dga(json_to_dga(doc.payload)).violations;
        else if (doc.kind == "link_dga") problems = validate_link_dga(LinkDGA(json_to_dga(doc.payload)));
        else if (doc.kind == "complex") problems = validate_complex(json_to_complex(doc.payload));
        else if (doc.kind == "pwc_script") problems = validate_script(json_to_script(doc.payload));
        if (problems.empty()) {
            if (out.format == "json")
                std::cout << canonical_dump({{"kind", doc.kind}, {"valid", true}});
            else std::cout << "pass\n";
            return 0;
        }
        if (out.format == "json")
            std::cout << canonical_dump({{"kind", doc.kind}, {"valid", false}, {"violations", problems}});
        else
            for (const auto& p : problems) std::cout << p << "\n";
        return 1;
    }

    if (*augment) {
        FilteredDGA dga = json_to_dga(parse_document(slurp(augment_file)).payload);
        require_field(dga.field().p());
        auto augs = find_augmentations(dga, augment_max);
        if (out.format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& a : augs) arr.push_back(augmentation_to_json(a));
            std::cout << canonical_dump({{"augmentations", arr}, {"count", augs.size()}});
        } else {
            std::cout << augs.size() << " augmentation(s)\n";
            for (std::size_t i = 0; i < augs.size(); ++i) {
                std::cout << "#" << i << ":";
                for (const auto& [name, v] : augs[i].values) std::cout << " " << name << "=" << v;
                std::cout << "\n";
            }
        }
        return 0;
    }

    if (*lin) {
        FilteredDGA dga = json_to_dga(parse_document(slurp(lin_file)).payload);
        require_field(dga.field().p());
        Augmentation eps;
        if (!lin_aug_file.empty())
            eps = json_to_augmentation(nlohmann::json::parse(slurp(lin_aug_file)), dga);
        else if (lin_aug_index >= 0) {
            auto augs = find_augmentations(dga, 1 << 20);
            if (static_cast<std::size_t>(lin_aug_index) >= augs.size())
                throw domain_error("augmentation index out of range");
            eps = augs[static_cast<std::size_t>(lin_aug_index)];
        } else
            throw domain_error("need --aug-file or --aug-index");
        FilteredComplex c = linearize(dga, eps);
        if (out.format == "json") std::cout << canonical_dump(complex_to_json(c));
        else std::cout << barcode_to_string(compute_barcode(c));
        return 0;
    }

    if (*cone) {
        LinkDGA link(json_to_dga(parse_document(slurp(cone_link)).payload));
        require_field(link.dga.field().p());
        BananaCounts counts;
        if (!cone_counts.empty())
            counts = json_to_counts(parse_document(slurp(cone_counts)).payload);
        Augmentation eps;
        if (!cone_aug.empty())
            eps = json_to_augmentation(nlohmann::json::parse(slurp(cone_aug)), link.dga);
        auto [wlo, whi] = parse_window(cone_window);
        RFCComplex rfc = build_rfc(link, eps, counts, wlo, whi, cone_n, cone_modulus);
        if (out.format == "json") {
            nlohmann::json j;
            j["rfc"] = complex_to_json(rfc.complex);
            j["n10"] = rfc.n10;
            j["barcode"] = barcode_to_json(compute_barcode(rfc.complex));
            std::cout << canonical_dump(j);
        } else {
            std::cout << "cone with " << rfc.complex.dim() << " generators (" << rfc.n10
                      << " on the 10 side)\n"
                      << barcode_to_string(compute_barcode(rfc.complex));
        }
        return 0;
    }

    if (*barcode_cmd) {
        FilteredComplex c = json_to_complex(parse_document(slurp(barcode_file)).payload);
        require_field(c.field.p());
        require_valid(c);
        if (!barcode_window.empty()) {
            auto [wlo, whi] = parse_window(barcode_window);
            c = window_subquotient(c, wlo, whi);
        }
        emit_barcode(compute_barcode(c), out);
        return 0;
    }

    if (*evolve_cmd) {
        PWCScript script = json_to_script(parse_document(slurp(evolve_file)).payload);
        std::vector<Rat> samples;
        if (!evolve_samples.empty()) samples = parse_rat_list(evolve_samples);
        auto frames = evolve(script, samples);
        if (out.format == "json") {
            nlohmann::json arr = nlohmann::json::array();
            for (const auto& f : frames) {
                nlohmann::json fj;
                fj["t"] = format_rational(f.t);
                fj["complex"] = complex_to_json(f.complex);
                fj["barcode"] = barcode_to_json(f.barcode);
                arr.push_back(fj);
            }
            std::cout << canonical_dump({{"frames", arr}});
        } else if (out.format == "svg") {
            for (const auto& f : frames) std::cout << barcode_to_svg(f.barcode);
        } else {
            for (const auto& f : frames) {
                std::cout << "t = " << format_rational(f.t) << "\n"
                          << barcode_to_string(f.barcode) << "\n";
            }
        }
        return 0;
    }

    if (*grade) {
        nlohmann::json j;
        if (grade_kind == "plane") {
            OrbitIndexInput in{g_n, g_mu, g_c1, g_bott, g_morse, g_perturbed};
            j["index"] = plane_index(in);
        } else if (grade_kind == "halfplane") {
            ChordIndexInput in{g_cz, g_maslov, g_bott, g_morse, g_perturbed};
            j["index"] = halfplane_index(in);
        } else {
            RPnChordLabel label{g_n, g_j, g_k, g_eps.empty() ? Rat(0) : parse_rational(g_eps)};
            RPnChord c = rpn_mixed_chord(label);
            j["name"] = c.name;
            j["degree"] = c.degree;
            j["action"] = action_to_json(c.action);
            j["direction"] = flavor_name(c.direction);
        }
        if (out.format == "json") std::cout << canonical_dump(j);
        else {
            for (auto it = j.begin(); it != j.end(); ++it)
                std::cout << it.key() << ": " << it.value().dump() << "\n";
        }
        return 0;
    }

    if (*rpn) {
        auto [wlo, whi] = parse_window(rpn_window);
        Rat eps = rpn_eps.empty() ? Rat(0) : parse_rational(rpn_eps);
        require_field(2); // the projective-space data is characteristic 2
        RFCComplex rfc = rpn_generate_rfc(rpn_n, wlo, whi, eps);
        Barcode bc = compute_barcode(rfc.complex);
        if (out.format == "svg") {
            emit_barcode(bc, out);
            return 0;
        }
        nlohmann::json j;
        if (rpn_emit == "rfc" || rpn_emit == "all") j["rfc"] = complex_to_json(rfc.complex);
        if (rpn_emit == "barcode" || rpn_emit == "all") j["barcode"] = barcode_to_json(bc);
        if (rpn_emit == "script" || rpn_emit == "all")
            j["script"] = script_to_json(rpn_action_shift_script(rpn_n, wlo, whi, eps));
        if (out.format == "json") std::cout << canonical_dump(j);
        else {
            std::cout << "RFC with " << rfc.complex.dim() << " generators\n";
            for (const auto& b : rfc.complex.basis)
                std::cout << "  " << b.name << "  deg " << b.degree << "  action "
                          << action_to_string(b.action) << "\n";
            std::cout << barcode_to_string(bc);
        }
        return 0;
    }

    if (*bounds_cmd) {
        nlohmann::json j;
        std::optional<BoundsInput> file_input;
        if (!bounds_input_file.empty()) {
            Document doc = parse_document(slurp(bounds_input_file));
            if (doc.kind != "bounds_input") throw domain_error("expected a bounds_input document");
            file_input = json_to_bounds_input(doc.payload);
        }
        if (*bt) {
            std::vector<long long> betti;
            std::size_t k = bt_k;
            Rat osc;
            ChordSpectrum spectrum;
            if (file_input && file_input->main_theorem) {
                const auto& mt = *file_input->main_theorem;
                betti = mt.betti;
                k = mt.k;
                osc = mt.osc;
                spectrum = mt.spectrum;
            } else {
                if (bt_betti.empty() || bt_osc.empty() || bt_spectrum.empty())
                    throw domain_error("need --betti, --osc and --spectrum (or --input)");
                betti = parse_int_list(bt_betti);
                osc = parse_rational(bt_osc);
                spectrum.lengths = parse_rat_list(bt_spectrum);
                spectrum.level = bt_level == "inf" ? ExtAction::pos_inf()
                                                   : ExtAction(Action(parse_rational(bt_level)));
                spectrum.hbar = bt_hbar == "inf" ? ExtAction::pos_inf()
                                                 : ExtAction(Action(parse_rational(bt_hbar)));
            }
            BoundResult r = main_theorem_bound(betti, k, osc, spectrum);
            j["admissible"] = r.admissible;
            if (r.admissible) j["bound"] = r.bound;
            else j["gate"] = r.gate;
        } else if (*scf) {
            std::vector<Rat> values;
            Rat eps;
            if (file_input && file_input->scf) {
                values = file_input->scf->values;
                eps = file_input->scf->eps;
            } else {
                if (scf_values.empty() || scf_eps.empty())
                    throw domain_error("need --values and --eps (or --input)");
                values = parse_rat_list(scf_values);
                eps = parse_rational(scf_eps);
            }
            j["constant"] = format_rational(scf_energy_constant(values, eps));
        } else if (*growth) {
            std::vector<std::pair<Rat, Rat>> pairs;
            Rat delta;
            if (file_input && file_input->growth) {
                pairs = file_input->growth->pairs;
                delta = file_input->growth->delta;
            } else {
                if (growth_pairs.empty() || growth_delta.empty())
                    throw domain_error("need --pairs and --delta (or --input)");
                std::stringstream ss(growth_pairs);
                std::string item;
                while (std::getline(ss, item, ',')) {
                    auto colon = item.find(':');
                    if (colon == std::string::npos) throw domain_error("pairs must be in:out,...");
                    pairs.emplace_back(parse_rational(item.substr(0, colon)),
                                       parse_rational(item.substr(colon + 1)));
                }
                delta = parse_rational(growth_delta);
            }
            GrowthVerdict v = action_growth_check(pairs, delta);
            j["ok"] = v.ok;
            j["violations"] = v.violations;
        } else if (*trace) {
            ConformalProfile profile;
            if (file_input && file_input->trace) {
                profile = *file_input->trace;
            } else {
                if (tr_fmin.empty() || tr_fmax.empty() || tr_eps.empty())
                    throw domain_error("need --f-min, --f-max and --eps (or --input)");
                profile = {parse_rational(tr_fmin), parse_rational(tr_fmax), parse_rational(tr_eps)};
            }
            TraceLengths t = trace_lengths(profile);
            auto dump = [](const ExpValue& v) {
                return nlohmann::json{{"coeff", format_rational(v.coeff)},
                                      {"exponent", format_rational(v.exponent)},
                                      {"enclosure",
                                       nlohmann::json::array({format_rational(v.enclosure_lo),
                                                              format_rational(v.enclosure_hi)})}};
            };
            j["len01"] = dump(t.len01);
            j["len10"] = dump(t.len10);
            j["c0"] = dump(t.c0);
        }
        if (out.format == "json") std::cout << canonical_dump(j);
        else std::cout << j.dump(2) << "\n";
        return 0;
    }

    if (*destab) {
        FilteredDGA dga = json_to_dga(parse_document(slurp(destab_file)).payload);
        require_valid(dga);
        auto [sti, result] = destabilize_pair(dga, destab_x, destab_y);
        nlohmann::json j;
        j["moves"] = sti.moves.size();
        j["result"] = dga_to_json(result);
        if (out.format == "json") std::cout << canonical_dump(j);
        else
            std::cout << sti.moves.size() << " move(s); result has " << result.size()
                      << " generator(s)\n";
        return 0;
    }

    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }
}
