#include "support.hpp"

#include <doctest.h>

using namespace jester;
using namespace jester::io;
using jester::testing::data_path;

TEST_CASE("sha256 of known strings")
{
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("words accept letter lists and strings")
{
    CHECK(word_from_json(Json::parse(R"([["a", 1], ["b", -1]])")) == testing::W("a b^-1"));
    CHECK(word_from_json(Json("a b^-1")) == testing::W("a b^-1"));
    CHECK_THROWS_AS(word_from_json(Json::parse(R"([["a", 2]])")), InputError);
    CHECK_THROWS_AS(word_from_json(Json::parse(R"([["a"]])")), InputError);
}

TEST_CASE("presentations round-trip bit-exactly")
{
    const std::string text = R"({"generators":["x","y"],"relators":[[["x",1],["y",-1]],[["y",1],["y",1]]]})";
    const auto p = presentation_from_json(Json::parse(text));
    CHECK(to_json(p).dump() == text);
    CHECK(presentation_from_json(to_json(p)) == p);
    CHECK_THROWS_AS(presentation_from_json(Json::parse(R"({"generators":["x"],"relators":[],"extra":1})")),
                    InputError);
    CHECK_THROWS_AS(presentation_from_json(Json::parse(R"({"generators":["x"],"relators":[[["z",1]]]})")),
                    InputError);
}

TEST_CASE("diagrams round-trip")
{
    const auto d = testing::mazur_diagram();
    CHECK(diagram_from_json(to_json(d)) == d);
    CHECK_THROWS_AS(diagram_from_json(Json::parse(R"({"arcs":[],"components":[],"crossings":[],"x":0})")), InputError);
}

TEST_CASE("relator files")
{
    const auto d = testing::mazur_diagram();
    const auto rels = relators_from_json(read_json(data_path("mazur_relators.json")), d);
    REQUIRE(rels.size() == 2);
    CHECK(rels[0].label == "r_zeta");
    CHECK(rels[0].word == links::longitude_word(d, 1, 0));
    const auto explicit_word = relators_from_json(Json::parse(R"({"relators":[{"label":"r","word":"x1 x2"}]})"), d);
    CHECK(explicit_word[0].word == testing::W("x1 x2"));
    CHECK_THROWS_AS(relators_from_json(Json::parse(R"({"relators":[{"label":"r"}]})"), d), InputError);
}

TEST_CASE("complexes and id lists")
{
    const auto j = read_json(data_path("jester_hat.json"));
    const auto k = complex_from_json(j);
    CHECK(euler_characteristic(k) == 1);
    CHECK(listed_simplices(j, k).size() == 216);
    CHECK(complex_from_json(to_json(k)) == k);
    CHECK(ids_from_json(read_json(data_path("jester_A.json"))).size() == 108);
    CHECK_THROWS_AS(complex_from_json(Json::parse(R"({"vertices":["a"],"simplices":[["b"]]})")), InputError);
}

TEST_CASE("polygons")
{
    const auto p = polygon_from_json(read_json(data_path("dunce_hat_polygon.json")));
    CHECK(p.word.size() == 3);
    CHECK(polygon_from_json(to_json(p)).word == p.word);
    CHECK_THROWS_AS(polygon_from_json(Json::parse(R"({"word":[["a",0]]})")), InputError);
}

TEST_CASE("sequences")
{
    const auto s = sequence_from_json(read_json(data_path("seq_z5_none.json")));
    CHECK(s.multiplicity("Z5") == 0u);
    CHECK_FALSE(s.multiplicity("Z2"));
    const auto again = sequence_from_json(to_json(s));
    CHECK(again.alphabet().size() == 3);
    CHECK(pro::pro_isomorphic(s, again).decision);
    CHECK_THROWS_AS(sequence_from_json(Json::parse(R"({"alphabet":[{"label":"G","table":[[0,1],[0,1]]}],"multiplicity":{"G":1}})")),
                    InputError);
    CHECK_THROWS_AS(sequence_from_json(Json::parse(R"({"alphabet":[{"label":"G","table":[[0]]}],"multiplicity":{"G":"many"}})")),
                    InputError);
}

TEST_CASE("representation specs")
{
    const auto spec = rep_spec_from_json(read_json(data_path("mazur_rep.json")));
    CHECK(spec.assignment.triangle.p == 7);
    CHECK(spec.assignment.images.size() == 2);
    CHECK(spec.meridian == "x5");
    CHECK(spec.expected_meridian == testing::W("beta^-2 gamma"));

    const auto t = TriangleSpec{7, 2, 5}.build();
    const auto r = isometry_from_json(Json::parse(R"({"reflections":["BC","AC"]})"), t);
    const auto q = isometry_from_json(Json::parse(R"({"rotation":{"vertex":"C","pi_times":[-2,5]}})"), t);
    CHECK(hyperbolic::max_abs(r.matrix() - q.matrix()) < 1e-9);
    CHECK_THROWS_AS(isometry_from_json(Json::parse(R"({"rotation":{"vertex":"D","angle":1}})"), t), InputError);
    CHECK_THROWS_AS(triangle_from_json(Json::parse(R"({"angles":[3,3,3]})")).build(), hyperbolic::NotHyperbolic);
    CHECK_THROWS_AS(assignment_from_json(Json::parse(R"({"triangle":{"angles":[3,3,3]},"generators":{}})")), InputError);
}

TEST_CASE("pipeline config")
{
    const auto c = config_from_json(Json::object());
    CHECK(c.seed == 1);
    CHECK(c.tol == 1e-9);
    CHECK(c.identity_tol == 1e-3);
    CHECK(c.budget == 1'000'000);
    const auto d = config_from_json(Json::parse(R"({"seed":7,"tol":1e-12,"budget":5,"output":"x.json"})"));
    CHECK(d.seed == 7);
    CHECK(d.output == "x.json");
    CHECK(config_from_json(to_json(d)).budget == 5);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"sead":7})")), InputError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"tol":-1})")), InputError);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"budget":0})")), InputError);
}

TEST_CASE("missing files are input errors")
{
    CHECK_THROWS_AS(read_json(data_path("no_such_file.json")), InputError);
}
