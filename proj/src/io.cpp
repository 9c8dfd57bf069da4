#include <jester/io.hpp>

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

namespace jester::io {

namespace {

const Json& at(const Json& j, const char* key, const std::string& what)
{
    if (!j.is_object() || !j.contains(key))
        throw InputError(what + ": missing key '" + key + "'");
    return j.at(key);
}

std::string as_string(const Json& j, const std::string& what)
{
    if (!j.is_string())
        throw InputError(what + ": expected a string");
    return j.get<std::string>();
}

long long as_int(const Json& j, const std::string& what)
{
    if (!j.is_number_integer())
        throw InputError(what + ": expected an integer");
    return j.get<long long>();
}

double as_number(const Json& j, const std::string& what)
{
    if (!j.is_number())
        throw InputError(what + ": expected a number");
    return j.get<double>();
}

const Json& as_array(const Json& j, const std::string& what)
{
    if (!j.is_array())
        throw InputError(what + ": expected an array");
    return j;
}

std::vector<std::string> string_list(const Json& j, const std::string& what)
{
    std::vector<std::string> out;
    for (const auto& x : as_array(j, what))
        out.push_back(as_string(x, what));
    return out;
}

/// Runs `f`, converting library errors raised while reading input into
/// InputError with context.
template <class F>
auto guarded(const std::string& what, F&& f)
{
    try {
        return f();
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(what + ": " + e.what());
    } catch (const nlohmann::json::exception& e) {
        throw InputError(what + ": " + e.what());
    }
}

} // namespace

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json(const std::filesystem::path& path)
{
    const std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

std::string sha256_hex(const std::string& bytes)
{
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw InputError("SHA-256 computation failed");
    std::ostringstream ss;
    for (unsigned int i = 0; i < len; ++i)
        ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return ss.str();
}

void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& what)
{
    if (!j.is_object())
        throw InputError(what + ": expected an object");
    for (const auto& [key, _] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            ok = ok || key == a;
        if (!ok)
            throw InputError(what + ": unknown key '" + key + "'");
    }
}

// ---------------------------------------------------------------------------

Json to_json(const group::Word& w)
{
    Json out = Json::array();
    for (const auto& l : w)
        out.push_back(Json::array({l.generator, l.exponent}));
    return out;
}

group::Word word_from_json(const Json& j)
{
    if (j.is_string())
        return guarded("word", [&] { return group::parse_word(j.get<std::string>()); });
    group::Word w;
    for (const auto& letter : as_array(j, "word")) {
        if (!letter.is_array() || letter.size() != 2)
            throw InputError("word: each letter is [generator, +1|-1]");
        const long long e = as_int(letter[1], "word exponent");
        if (e != 1 && e != -1)
            throw InputError("word: exponent " + std::to_string(e) + " is not +1 or -1");
        w.push_back({as_string(letter[0], "word generator"), static_cast<int>(e)});
    }
    return w;
}

Json to_json(const group::Presentation& p)
{
    Json rels = Json::array();
    for (const auto& r : p.relators())
        rels.push_back(to_json(r));
    return Json{{"generators", p.generators()}, {"relators", rels}};
}

group::Presentation presentation_from_json(const Json& j)
{
    require_keys(j, {"generators", "relators"}, "presentation");
    auto gens = string_list(at(j, "generators", "presentation"), "presentation generators");
    std::vector<group::Word> rels;
    for (const auto& r : as_array(at(j, "relators", "presentation"), "presentation relators"))
        rels.push_back(word_from_json(r));
    return guarded("presentation", [&] { return group::Presentation(std::move(gens), std::move(rels)); });
}

// ---------------------------------------------------------------------------

Json to_json(const links::LinkDiagram& d)
{
    Json crossings = Json::array();
    for (const auto& c : d.crossings)
        crossings.push_back(
            Json{{"over", c.over}, {"under_in", c.under_in}, {"under_out", c.under_out}, {"sign", c.sign}});
    return Json{{"arcs", d.arcs}, {"components", d.components}, {"crossings", crossings}};
}

links::LinkDiagram diagram_from_json(const Json& j)
{
    require_keys(j, {"arcs", "components", "crossings", "comment"}, "diagram");
    links::LinkDiagram d;
    d.arcs = string_list(at(j, "arcs", "diagram"), "diagram arcs");
    for (const auto& c : as_array(at(j, "components", "diagram"), "diagram components"))
        d.components.push_back(string_list(c, "diagram component"));
    for (const auto& c : as_array(at(j, "crossings", "diagram"), "diagram crossings")) {
        require_keys(c, {"over", "under_in", "under_out", "sign"}, "crossing");
        d.crossings.push_back({as_string(at(c, "over", "crossing"), "crossing over"),
                               as_string(at(c, "under_in", "crossing"), "crossing under_in"),
                               as_string(at(c, "under_out", "crossing"), "crossing under_out"),
                               static_cast<int>(as_int(at(c, "sign", "crossing"), "crossing sign"))});
    }
    return d;
}

std::vector<links::SurgeryRelator> relators_from_json(const Json& j, const links::LinkDiagram& d)
{
    require_keys(j, {"relators", "comment"}, "relators file");
    std::vector<links::SurgeryRelator> out;
    for (const auto& r : as_array(at(j, "relators", "relators file"), "relators")) {
        require_keys(r, {"label", "longitude", "word"}, "relator");
        const std::string label = as_string(at(r, "label", "relator"), "relator label");
        if (r.contains("longitude") == r.contains("word"))
            throw InputError("relator '" + label + "': give exactly one of 'longitude' and 'word'");
        if (r.contains("word")) {
            links::SurgeryRelator s;
            s.label = label;
            s.word = group::free_reduce(word_from_json(r.at("word")));
            s.source = links::SurgeryRelator::Source::explicit_word;
            out.push_back(std::move(s));
            continue;
        }
        const Json& lon = r.at("longitude");
        require_keys(lon, {"component", "framing", "reference"}, "longitude");
        const long long comp = as_int(at(lon, "component", "longitude"), "longitude component");
        const long long framing = lon.contains("framing") ? as_int(lon.at("framing"), "longitude framing") : 0;
        auto reference = links::FramingReference::blackboard;
        if (lon.contains("reference")) {
            const std::string ref = as_string(lon.at("reference"), "longitude reference");
            if (ref == "seifert")
                reference = links::FramingReference::seifert;
            else if (ref != "blackboard")
                throw InputError("longitude reference must be 'blackboard' or 'seifert'");
        }
        if (comp < 0)
            throw InputError("longitude component must be non-negative");
        links::SurgeryRelator s;
        s.label = label;
        s.source = links::SurgeryRelator::Source::longitude;
        s.component = static_cast<std::size_t>(comp);
        s.framing = static_cast<int>(framing);
        s.word = links::longitude_word(d, s.component, s.framing, reference);
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------

Json to_json(const complexes::SimplicialComplex& k)
{
    Json simplices = Json::array();
    for (const auto& s : k.maximal_simplices())
        simplices.push_back(k.names(s));
    return Json{{"vertices", k.vertices()}, {"simplices", simplices}};
}

complexes::SimplicialComplex complex_from_json(const Json& j)
{
    require_keys(j, {"vertices", "simplices", "comment"}, "complex");
    auto vertices = string_list(at(j, "vertices", "complex"), "complex vertices");
    std::vector<std::vector<std::string>> simplices;
    for (const auto& s : as_array(at(j, "simplices", "complex"), "complex simplices"))
        simplices.push_back(string_list(s, "simplex"));
    return guarded("complex",
                   [&] { return complexes::SimplicialComplex::from_named(std::move(vertices), simplices); });
}

std::vector<complexes::Simplex> listed_simplices(const Json& j, const complexes::SimplicialComplex& k)
{
    std::vector<complexes::Simplex> out;
    for (const auto& s : as_array(at(j, "simplices", "complex"), "complex simplices"))
        out.push_back(guarded("complex", [&] { return k.simplex(string_list(s, "simplex")); }));
    return out;
}

Json to_json(const complexes::IdentificationPolygon& p)
{
    Json word = Json::array();
    for (const auto& s : p.word)
        word.push_back(Json::array({s.label, s.direction}));
    return Json{{"word", word}};
}

complexes::IdentificationPolygon polygon_from_json(const Json& j)
{
    require_keys(j, {"word", "comment"}, "polygon");
    complexes::IdentificationPolygon p;
    for (const auto& s : as_array(at(j, "word", "polygon"), "polygon word")) {
        if (!s.is_array() || s.size() != 2)
            throw InputError("polygon: each side is [label, +1|-1]");
        const long long dir = as_int(s[1], "side direction");
        if (dir != 1 && dir != -1)
            throw InputError("polygon: side direction must be +1 or -1");
        p.word.push_back({as_string(s[0], "side label"), static_cast<int>(dir)});
    }
    return p;
}

std::vector<std::size_t> ids_from_json(const Json& j)
{
    require_keys(j, {"triangles", "comment"}, "id list");
    std::vector<std::size_t> out;
    for (const auto& x : as_array(at(j, "triangles", "id list"), "triangles")) {
        const long long v = as_int(x, "triangle id");
        if (v < 0)
            throw InputError("triangle ids are non-negative");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

// ---------------------------------------------------------------------------

Json to_json(const pro::FactorSequence& s)
{
    Json alphabet = Json::array();
    Json mult = Json::object();
    for (const auto& g : s.alphabet()) {
        alphabet.push_back(Json{{"label", g.label()}, {"table", g.table()}});
        const auto m = s.multiplicity(g.label());
        if (m)
            mult[g.label()] = *m;
        else
            mult[g.label()] = "inf";
    }
    return Json{{"alphabet", alphabet}, {"multiplicity", mult}};
}

pro::FactorSequence sequence_from_json(const Json& j)
{
    require_keys(j, {"alphabet", "multiplicity", "comment"}, "sequence");
    std::vector<pro::FiniteGroup> alphabet;
    for (const auto& g : as_array(at(j, "alphabet", "sequence"), "sequence alphabet")) {
        require_keys(g, {"label", "table"}, "alphabet entry");
        const std::string label = as_string(at(g, "label", "alphabet entry"), "group label");
        pro::FiniteGroup::Table table;
        for (const auto& row : as_array(at(g, "table", "alphabet entry"), "group table")) {
            std::vector<int> r;
            for (const auto& x : as_array(row, "table row"))
                r.push_back(static_cast<int>(as_int(x, "table entry")));
            table.push_back(std::move(r));
        }
        alphabet.push_back(guarded("group '" + label + "'", [&] { return pro::FiniteGroup(label, table); }));
    }
    std::map<std::string, pro::Multiplicity> mult;
    const Json& m = at(j, "multiplicity", "sequence");
    if (!m.is_object())
        throw InputError("sequence multiplicity: expected an object");
    for (const auto& [label, v] : m.items()) {
        if (v.is_string()) {
            if (v.get<std::string>() != "inf")
                throw InputError("multiplicity of '" + label + "' must be an integer or \"inf\"");
            mult[label] = std::nullopt;
        } else {
            const long long n = as_int(v, "multiplicity of '" + label + "'");
            if (n < 0)
                throw InputError("multiplicity of '" + label + "' is negative");
            mult[label] = static_cast<std::uint64_t>(n);
        }
    }
    return guarded("sequence", [&] { return pro::FactorSequence(std::move(alphabet), std::move(mult)); });
}

// ---------------------------------------------------------------------------

hyperbolic::Triangle TriangleSpec::build() const
{
    const hyperbolic::Real pi = hyperbolic::real_pi();
    return hyperbolic::triangle_from_angles(pi / p, pi / q, pi / r);
}

TriangleSpec triangle_from_json(const Json& j)
{
    require_keys(j, {"angles"}, "triangle");
    const Json& a = as_array(at(j, "angles", "triangle"), "triangle angles");
    if (a.size() != 3)
        throw InputError("triangle: 'angles' needs three entries [p, q, r] for pi/p, pi/q, pi/r at A, B, C");
    TriangleSpec t{static_cast<int>(as_int(a[0], "angle")), static_cast<int>(as_int(a[1], "angle")),
                   static_cast<int>(as_int(a[2], "angle"))};
    if (t.p < 2 || t.q < 2 || t.r < 2)
        throw InputError("triangle: each entry must be at least 2");
    return t;
}

hyperbolic::Isometry isometry_from_json(const Json& j, const hyperbolic::Triangle& t)
{
    require_keys(j, {"rotation", "reflections"}, "generator image");
    if (j.contains("rotation") == j.contains("reflections"))
        throw InputError("generator image: give exactly one of 'rotation' and 'reflections'");
    if (j.contains("rotation")) {
        const Json& r = j.at("rotation");
        require_keys(r, {"vertex", "angle", "pi_times"}, "rotation");
        const std::string v = as_string(at(r, "vertex", "rotation"), "rotation vertex");
        const hyperbolic::HPoint* p = v == "A" ? &t.a : v == "B" ? &t.b : v == "C" ? &t.c : nullptr;
        if (!p)
            throw InputError("rotation vertex must be A, B or C");
        if (r.contains("angle") == r.contains("pi_times"))
            throw InputError("rotation: give exactly one of 'angle' and 'pi_times'");
        hyperbolic::Real angle = 0;
        if (r.contains("angle")) {
            angle = as_number(r.at("angle"), "rotation angle");
        } else {
            const Json& f = as_array(r.at("pi_times"), "pi_times");
            if (f.size() != 2 || as_int(f[1], "pi_times denominator") == 0)
                throw InputError("pi_times is [numerator, nonzero denominator]");
            angle = hyperbolic::real_pi() * as_int(f[0], "pi_times numerator") / as_int(f[1], "pi_times denominator");
        }
        return hyperbolic::rotation(*p, angle);
    }
    hyperbolic::Isometry m;
    for (const auto& name : string_list(j.at("reflections"), "reflections")) {
        const hyperbolic::Geodesic* g = name == "BC" ? &t.bc : name == "AC" ? &t.ac : name == "AB" ? &t.ab : nullptr;
        if (!g)
            throw InputError("reflection edge must be BC, AC or AB");
        m = m * hyperbolic::reflect(*g);
    }
    return m;
}

Assignment assignment_from_json(const Json& j)
{
    require_keys(j, {"triangle", "generators", "comment"}, "assignment");
    Assignment a;
    a.triangle = triangle_from_json(at(j, "triangle", "assignment"));
    const auto tri = guarded("triangle", [&] { return a.triangle.build(); });
    const Json& gens = at(j, "generators", "assignment");
    if (!gens.is_object())
        throw InputError("assignment generators: expected an object");
    for (const auto& [g, image] : gens.items())
        a.images.emplace(g, isometry_from_json(image, tri));
    return a;
}

RepSpec rep_spec_from_json(const Json& j)
{
    require_keys(j, {"triangle", "generators", "presentation", "definitions", "arc_seeds", "meridian",
                     "expected_meridian", "comment"},
                 "representation");
    RepSpec s;
    Json assignment{{"triangle", at(j, "triangle", "representation")},
                    {"generators", at(j, "generators", "representation")}};
    s.assignment = assignment_from_json(assignment);
    s.quotient = presentation_from_json(at(j, "presentation", "representation"));
    if (j.contains("definitions")) {
        if (!j.at("definitions").is_object())
            throw InputError("definitions: expected an object");
        for (const auto& [name, w] : j.at("definitions").items())
            s.definitions[name] = word_from_json(w);
    }
    const Json& seeds = at(j, "arc_seeds", "representation");
    if (!seeds.is_object() || seeds.empty())
        throw InputError("arc_seeds: expected a non-empty object");
    for (const auto& [arc, w] : seeds.items())
        s.arc_seeds[arc] = word_from_json(w);
    s.meridian = as_string(at(j, "meridian", "representation"), "meridian");
    if (j.contains("expected_meridian"))
        s.expected_meridian = word_from_json(j.at("expected_meridian"));
    return s;
}

// ---------------------------------------------------------------------------

PipelineConfig config_from_json(const Json& j)
{
    require_keys(j, {"seed", "tol", "identity_tol", "budget", "output"}, "config");
    PipelineConfig c;
    if (j.contains("seed")) {
        const long long v = as_int(j.at("seed"), "seed");
        if (v < 0)
            throw InputError("seed must be non-negative");
        c.seed = static_cast<std::uint64_t>(v);
    }
    if (j.contains("tol"))
        c.tol = as_number(j.at("tol"), "tol");
    if (j.contains("identity_tol"))
        c.identity_tol = as_number(j.at("identity_tol"), "identity_tol");
    if (j.contains("budget")) {
        const long long v = as_int(j.at("budget"), "budget");
        if (v <= 0)
            throw InputError("budget must be positive");
        c.budget = static_cast<std::uint64_t>(v);
    }
    if (j.contains("output"))
        c.output = as_string(j.at("output"), "output");
    if (!(c.tol > 0) || !(c.identity_tol > 0))
        throw InputError("tolerances must be positive");
    return c;
}

Json to_json(const PipelineConfig& c)
{
    Json j{{"seed", c.seed}, {"tol", c.tol}, {"identity_tol", c.identity_tol}, {"budget", c.budget}};
    if (c.output)
        j["output"] = *c.output;
    return j;
}

} // namespace jester::io
