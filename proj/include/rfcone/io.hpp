#pragma once

#include <json.hpp>

#include "rfcone/bounds.hpp"
#include "rfcone/grading.hpp"
#include "rfcone/pwc.hpp"
#include "rfcone/rabinowitz.hpp"

namespace rfcone {

// Parse failure with the JSON path of the offending field.
class parse_error : public domain_error {
public:
    parse_error(const std::string& path, const std::string& reason)
        : domain_error(path + ": " + reason), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct Document {
    std::string kind; // dga, link_dga, complex, counts, pwc_script, osc_profile, bounds_input
    int version = 1;
    nlohmann::json payload; // the full document object
};

// Structural validation: known kind, version, payload parses as its kind.
Document parse_document(const std::string& text);

std::string serialize_document(const Document& doc); // canonical form

// Input bundle for the bounds subcommands; sections are optional.
struct BoundsInput {
    struct MainTheorem {
        std::vector<long long> betti;
        std::size_t k = 1;
        Rat osc;
        ChordSpectrum spectrum;
    };
    struct Scf {
        std::vector<Rat> values;
        Rat eps;
    };
    struct Growth {
        Rat delta;
        std::vector<std::pair<Rat, Rat>> pairs;
    };
    std::optional<MainTheorem> main_theorem;
    std::optional<Scf> scf;
    std::optional<Growth> growth;
    std::optional<ConformalProfile> trace;
};

BoundsInput json_to_bounds_input(const nlohmann::json& j);

// kind-specific readers (payload = full document object)
FilteredDGA json_to_dga(const nlohmann::json& j);
FilteredComplex json_to_complex(const nlohmann::json& j);
BananaCounts json_to_counts(const nlohmann::json& j);
PWCScript json_to_script(const nlohmann::json& j);
OscillationProfile json_to_profile(const nlohmann::json& j);
Augmentation json_to_augmentation(const nlohmann::json& j, const FilteredDGA& dga);

// canonical writers
nlohmann::json dga_to_json(const FilteredDGA& dga, const std::string& kind = "dga");
nlohmann::json complex_to_json(const FilteredComplex& c);
nlohmann::json counts_to_json(const BananaCounts& counts);
nlohmann::json script_to_json(const PWCScript& script);
nlohmann::json profile_to_json(const OscillationProfile& osc);
nlohmann::json augmentation_to_json(const Augmentation& eps);
nlohmann::json barcode_to_json(const Barcode& bc);

nlohmann::json action_to_json(const Action& a);
Action json_to_action(const nlohmann::json& j, const std::string& path);
nlohmann::json ext_action_to_json(const ExtAction& a);
ExtAction json_to_ext_action(const nlohmann::json& j, const std::string& path);

// One row per bar, x axis in action units, arrowheads on infinite bars.
std::string barcode_to_svg(const Barcode& bc);

std::string canonical_dump(const nlohmann::json& j);

} // namespace rfcone
