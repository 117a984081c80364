#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracle_util.hpp"
#include "rfcone/io.hpp"

using namespace rfcone;
using testutil::Rng;

TEST_CASE("rational strings are strict") {
    CHECK(parse_rational("3/4") == Rat(3, 4));
    CHECK(parse_rational("-3/4") == Rat(-3, 4));
    CHECK(parse_rational("7") == Rat(7));
    CHECK(!try_parse_rational("1/0"));
    CHECK(!try_parse_rational("2/4"));   // not reduced
    CHECK(!try_parse_rational("1/-2"));  // sign in the denominator
    CHECK(!try_parse_rational("01"));    // leading zero
    CHECK(!try_parse_rational(""));
    CHECK(format_rational(Rat(-3, 4)) == "-3/4");
    CHECK(format_rational(Rat(5)) == "5/1");
}

TEST_CASE("action json forms") {
    CHECK(json_to_action(nlohmann::json("3/2"), "") == Action(Rat(3, 2)));
    nlohmann::json pij{{"pi", "1/4"}, {"const", "-1/200"}};
    Action a = json_to_action(pij, "");
    CHECK(a == Action(Rat(1, 4), Rat(-1, 200)));
    CHECK(action_to_json(a) == pij);
    CHECK(action_to_json(Action(Rat(3, 2))) == nlohmann::json("3/2"));
    CHECK(json_to_ext_action(nlohmann::json("inf"), "") == ExtAction::pos_inf());
}

TEST_CASE("dga documents round trip canonically") {
    std::string text = R"({
      "kind": "dga",
      "version": 1,
      "field": 2,
      "grading_modulus": 0,
      "generators": [
        {"name": "y", "degree": 0, "action": "1/1", "differential": []},
        {"name": "x", "degree": 1, "action": "2/1",
         "differential": [{"word": ["y"], "coeff": 1}]}
      ]
    })";
    Document doc = parse_document(text);
    CHECK(doc.kind == "dga");
    FilteredDGA dga = json_to_dga(doc.payload);
    CHECK(dga.size() == 2);
    CHECK(validate_dga(dga).ok());

    // canonical serialization is a fixed point
    std::string canon = serialize_document(doc);
    Document again = parse_document(canon);
    CHECK(serialize_document(again) == canon);
}

TEST_CASE("parse errors carry the offending path") {
    std::string bad_action = R"({
      "kind": "dga", "version": 1, "field": 2, "grading_modulus": 0,
      "generators": [{"name": "a", "degree": 0, "action": "1/0"}]
    })";
    try {
        parse_document(bad_action);
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(e.path() == "/generators/0/action");
    }

    std::string dup = R"({
      "kind": "dga", "version": 1, "field": 2, "grading_modulus": 0,
      "generators": [
        {"name": "a", "degree": 0, "action": "1/1"},
        {"name": "a", "degree": 0, "action": "2/1"}
      ]
    })";
    try {
        parse_document(dup);
        CHECK(false);
    } catch (const parse_error& e) {
        CHECK(e.path().find("/generators/1/name") == 0);
    }

    CHECK_THROWS_AS(parse_document("{\"kind\": \"widget\", \"version\": 1}"), parse_error);
    CHECK_THROWS_AS(parse_document("not json"), parse_error);
}

TEST_CASE("complex documents round trip through the typed reader") {
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        FilteredComplex c = testutil::random_complex(rng, 8, rng.chance(1, 2) ? 2 : 3);
        nlohmann::json j = complex_to_json(c);
        FilteredComplex back = json_to_complex(j);
        require_valid(back);
        CHECK(back.dim() == c.dim());
        CHECK(same_bar_multiset(compute_barcode(back), compute_barcode(c)));
        // canonical dump is stable
        CHECK(canonical_dump(complex_to_json(back)) == canonical_dump(j));
    }
}

TEST_CASE("script and profile documents parse") {
    std::string script_text = R"({
      "kind": "pwc_script", "version": 1,
      "t_range": ["0/1", "1/1"],
      "initial": {
        "kind": "complex", "version": 1, "field": 2, "grading_modulus": 0,
        "window": ["-inf", "inf"],
        "basis": [{"name": "y", "degree": 0, "action": "1/1"},
                   {"name": "x", "degree": 1, "action": "3/1"}],
        "differential": [{"from": "x", "to": "y", "coeff": 1}]
      },
      "trajectories": {
        "y": [["0/1", "1/1"], ["1/1", "2/1"]],
        "x": [["0/1", "3/1"], ["1/1", "4/1"]]
      },
      "events": []
    })";
    PWCScript script = json_to_script(parse_document(script_text).payload);
    auto frames = evolve(script);
    CHECK(frames.back().barcode.bars.size() == 1);
    // canonical round trip
    std::string canon = serialize_document(parse_document(script_text));
    CHECK(serialize_document(parse_document(canon)) == canon);

    std::string profile_text = R"({
      "kind": "osc_profile", "version": 1,
      "integrand": [["0/1", "3/10"], ["1/1", "3/10"]]
    })";
    OscillationProfile osc = json_to_profile(parse_document(profile_text).payload);
    CHECK(osc.integrand.integral(Rat(0), Rat(1)) == Rat(3, 10));
}

TEST_CASE("counts documents") {
    std::string text = R"({
      "kind": "counts", "version": 1,
      "entries": [{"x01": "a", "y10": "b", "coeff": 1}]
    })";
    BananaCounts counts = json_to_counts(parse_document(text).payload);
    CHECK(counts.entries.size() == 1);
    CHECK(counts.entries.at({"a", "b"}) == 1);
}

TEST_CASE("barcode json and svg render") {
    Barcode bc;
    bc.bars.push_back(Bar{Action(Rat(1)), ExtAction(Action(Rat(3))), 0});
    bc.bars.push_back(Bar{Action(Rat(2)), ExtAction::pos_inf(), 1});
    nlohmann::json j = barcode_to_json(bc);
    CHECK(j["bars"].size() == 2);
    CHECK(j["bars"][0]["end"] == "3/1");
    CHECK(j["bars"][1]["end"] == "inf");

    std::string svg = barcode_to_svg(bc);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("path") != std::string::npos); // the infinity arrowhead
}

TEST_CASE("augmentation json") {
    FilteredDGA dga{GroundField(3), 0};
    dga.add_generator({"a", 0, Action(Rat(1)), Flavor::Pure});
    Augmentation eps = json_to_augmentation(nlohmann::json{{"a", 2}}, dga);
    CHECK(eps.value("a") == 2);
    CHECK_THROWS_AS(json_to_augmentation(nlohmann::json{{"zz", 1}}, dga), parse_error);
    CHECK_THROWS_AS(json_to_augmentation(nlohmann::json{{"a", 3}}, dga), parse_error);
}
