#pragma once

#include <jester/complexes.hpp>
#include <jester/hyperbolic.hpp>
#include <jester/links.hpp>
#include <jester/presentations.hpp>
#include <jester/prosequences.hpp>

#include <json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jester::io {

JESTER_DEFINE_ERROR(InputError);

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file; throws InputError with the path on failure.
Json read_json(const std::filesystem::path& path);
/// Raw bytes of a file (for content hashing).
std::string read_file(const std::filesystem::path& path);
/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(const std::string& bytes);

/// Throws InputError if `j` is not an object or has keys outside `allowed`.
void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what);

// Words: [[generator, +1|-1], ...]. Word fields in hand-written files may
// also be strings such as "x7^-1 x5" (see group::parse_word).
Json to_json(const group::Word& w);
group::Word word_from_json(const Json& j);

// {"generators": [...], "relators": [[[g, e], ...], ...]}
Json to_json(const group::Presentation& p);
group::Presentation presentation_from_json(const Json& j);

// {"arcs": [...], "components": [[...]], "crossings": [{"over", "under_in", "under_out", "sign"}]}
Json to_json(const links::LinkDiagram& d);
links::LinkDiagram diagram_from_json(const Json& j);

/// Relator list for `wirtinger --adjoin`:
/// {"relators": [{"label": "r", "longitude": {"component": c, "framing": n,
///   "reference": "blackboard"|"seifert"}} | {"label": "r", "word": ...}]}
std::vector<links::SurgeryRelator> relators_from_json(const Json& j, const links::LinkDiagram& d);

// {"vertices": [...], "simplices": [[names of maximal simplices]]}
Json to_json(const complexes::SimplicialComplex& k);
complexes::SimplicialComplex complex_from_json(const Json& j);
/// The simplices exactly as listed in a complex file, as sorted index sets of `k`.
std::vector<complexes::Simplex> listed_simplices(const Json& j, const complexes::SimplicialComplex& k);

// {"word": [[label, +1|-1], ...]}
Json to_json(const complexes::IdentificationPolygon& p);
complexes::IdentificationPolygon polygon_from_json(const Json& j);

/// Simplex id list for `split`: {"triangles": [i, ...]} indexes the
/// maximal simplices of the complex file in listed order.
std::vector<std::size_t> ids_from_json(const Json& j);

// {"alphabet": [{"label", "table"}], "multiplicity": {label: n | "inf"}}
Json to_json(const pro::FactorSequence& s);
pro::FactorSequence sequence_from_json(const Json& j);

/// Triangle with angles pi/p, pi/q, pi/r at A, B, C: {"angles": [p, q, r]}.
struct TriangleSpec {
    int p = 0, q = 0, r = 0;
    hyperbolic::Triangle build() const;
};
TriangleSpec triangle_from_json(const Json& j);

/// Image of one generator:
///   {"rotation": {"vertex": "A"|"B"|"C", "angle": radians}}
///   {"rotation": {"vertex": ..., "pi_times": [n, d]}}        (angle n*pi/d)
///   {"reflections": ["BC", "AC"]}                              (r_BC o r_AC)
hyperbolic::Isometry isometry_from_json(const Json& j, const hyperbolic::Triangle& t);

/// {"triangle": {...}, "generators": {g: image, ...}}
struct Assignment {
    TriangleSpec triangle;
    hyperbolic::IsometryAssignment images;
};
Assignment assignment_from_json(const Json& j);

/// Inputs of the representation stage of the Mazur pipeline.
struct RepSpec {
    Assignment assignment;
    group::Presentation quotient;          ///< e.g. <beta, gamma | gamma^7, beta^5, (beta gamma)^2>
    group::WordAssignment definitions;     ///< extra names, e.g. alpha = gamma^4
    std::map<std::string, group::Word> arc_seeds;  ///< arc -> word in quotient generators/definitions
    std::string meridian;                  ///< arc whose image certifies nontriviality
    std::optional<group::Word> expected_meridian;  ///< optional cross-check word
};
RepSpec rep_spec_from_json(const Json& j);

/// Global options shared by all commands. Unknown keys are rejected.
struct PipelineConfig {
    std::uint64_t seed = 1;
    double tol = 1e-9;              ///< relator residual tolerance
    double identity_tol = 1e-3;     ///< nontriviality threshold
    std::uint64_t budget = 1'000'000;
    std::optional<std::string> output;
};
PipelineConfig config_from_json(const Json& j);
Json to_json(const PipelineConfig& c);

} // namespace jester::io
