#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace jester;
using namespace jester::complexes;

namespace {

SimplicialComplex triangle() { return SimplicialComplex::from_named({"u", "v", "w"}, {{"u", "v", "w"}}); }

IdentificationPolygon polygon(std::initializer_list<std::pair<const char*, int>> sides)
{
    IdentificationPolygon p;
    for (const auto& [l, d] : sides)
        p.word.push_back({l, d});
    return p;
}

const PolygonComplex& dunce_hat()
{
    static const PolygonComplex pc = polygon_identification_complex(polygon({{"a", 1}, {"a", 1}, {"a", -1}}));
    return pc;
}

const PolygonComplex& jester_hat()
{
    static const PolygonComplex pc =
        polygon_identification_complex(polygon({{"a", 1}, {"a", -1}, {"a", 1}, {"b", 1}, {"b", -1}, {"b", 1}}));
    return pc;
}

std::size_t edge_degree(const SimplicialComplex& k, const Simplex& e)
{
    std::size_t n = 0;
    for (const auto& s : k.simplices())
        n += s.size() == 3 && is_face(e, s);
    return n;
}

} // namespace

TEST_CASE("complexes must be face-closed")
{
    CHECK_THROWS_AS(SimplicialComplex({"u", "v"}, {{0, 1}}), MalformedComplex);
    CHECK_THROWS_AS(SimplicialComplex({"u", "v"}, {{0, 0}}), MalformedComplex);
    CHECK_NOTHROW(SimplicialComplex({"u", "v"}, {{0}, {1}, {0, 1}}));
    const auto k = triangle();
    CHECK(k.size() == 7);
    CHECK(k.counts_by_dimension() == std::vector<std::size_t>{3, 3, 1});
    CHECK(k.maximal_simplices().size() == 1);
}

TEST_CASE("euler characteristic")
{
    CHECK(euler_characteristic(SimplicialComplex::from_named({"p"}, {{"p"}})) == 1);
    CHECK(euler_characteristic(triangle()) == 1);
    CHECK(euler_characteristic(dunce_hat().complex) == 1);
    const auto sphere = polygon_identification_complex(polygon({{"a", 1}, {"a", -1}, {"b", 1}, {"b", -1}}));
    CHECK(euler_characteristic(sphere.complex) == 2);
    const auto torus = polygon_identification_complex(polygon({{"a", 1}, {"b", 1}, {"a", -1}, {"b", -1}}));
    CHECK(euler_characteristic(torus.complex) == 0);
}

TEST_CASE("free faces")
{
    const auto f = free_faces(triangle());
    CHECK(f.size() == 3);
    for (const auto& p : f) {
        CHECK(p.face.size() == 2);
        CHECK(p.coface.size() == 3);
    }
    CHECK(free_faces(dunce_hat().complex).empty());
    for (const auto& p : free_faces(jester_hat().complex))
        CHECK(p.face.size() != 2);
}

TEST_CASE("elementary collapse")
{
    const auto k = triangle();
    const auto l = elementary_collapse(k, {0, 1}, {0, 1, 2});
    CHECK(l.size() == 5);
    CHECK(l.counts_by_dimension() == std::vector<std::size_t>{3, 2});
    CHECK(euler_characteristic(l) == euler_characteristic(k));
    CHECK_THROWS_AS(elementary_collapse(l, {2}, {0, 2}), NotFreePair);
    CHECK_THROWS_AS(elementary_collapse(k, {0}, {0, 1}), NotFreePair);
}

TEST_CASE("collapsibility")
{
    SUBCASE("a 2-simplex collapses in three steps")
    {
        const auto r = is_collapsible(triangle());
        CHECK(r.verdict == CollapseResult::Verdict::collapsible);
        REQUIRE(r.sequence);
        CHECK(r.sequence->steps.size() == 3);
        CHECK(verify_collapse_sequence(triangle(), *r.sequence));
    }
    SUBCASE("the dunce hat has no free face")
    {
        const auto r = is_collapsible(dunce_hat().complex);
        CHECK(r.verdict == CollapseResult::Verdict::not_collapsible);
        CHECK(r.reason == CollapseResult::Reason::no_free_face);
        CHECK(r.states == 0);
    }
    SUBCASE("a circle and two points are rejected by cheap invariants")
    {
        const auto circle = SimplicialComplex::from_named({"u", "v", "w"}, {{"u", "v"}, {"v", "w"}, {"u", "w"}});
        CHECK(is_collapsible(circle).reason == CollapseResult::Reason::euler_characteristic);
        const auto two = SimplicialComplex::from_named({"u", "v"}, {{"u"}, {"v"}});
        CHECK(is_collapsible(two).reason == CollapseResult::Reason::disconnected);
        CHECK_THROWS_AS(is_collapsible(SimplicialComplex()), EmptyComplex);
    }
    SUBCASE("tiny budgets are reported as inconclusive, not as negative")
    {
        // A 2-disc made of a fan of triangles, with greedy restarts disabled.
        std::vector<std::vector<std::string>> fan;
        for (int i = 0; i < 6; ++i)
            fan.push_back({"o", "v" + std::to_string(i), "v" + std::to_string(i + 1)});
        std::vector<std::string> names{"o"};
        for (int i = 0; i <= 6; ++i)
            names.push_back("v" + std::to_string(i));
        const auto disc = SimplicialComplex::from_named(names, fan);
        CollapseOptions o;
        o.budget = 2;
        o.greedy_restarts = 0;
        CHECK(is_collapsible(disc, o).verdict == CollapseResult::Verdict::budget_exceeded);
        o.budget = 1'000'000;
        CHECK(is_collapsible(disc, o).verdict == CollapseResult::Verdict::collapsible);
    }
    SUBCASE("exhaustive search proves a negative answer")
    {
        // The dunce hat plus a pendant triangle on one edge: it has free faces,
        // chi = 1, but it cannot collapse because the hat itself cannot.
        auto tris = dunce_hat().triangles;
        auto names = dunce_hat().complex.vertices();
        names.push_back("extra");
        const int x = static_cast<int>(names.size()) - 1;
        const Simplex e = *std::find_if(dunce_hat().complex.simplices().begin(), dunce_hat().complex.simplices().end(),
                                        [](const Simplex& s) { return s.size() == 2; });
        tris.push_back({e[0], e[1], x});
        const auto k = SimplicialComplex::from_maximal(names, tris);
        CHECK(euler_characteristic(k) == 1);
        CHECK_FALSE(free_faces(k).empty());
        const auto r = is_collapsible(k);
        CHECK(r.verdict == CollapseResult::Verdict::not_collapsible);
        CHECK(r.reason == CollapseResult::Reason::exhausted);
    }
}

TEST_CASE("verify_collapse_sequence rejects reordered steps")
{
    const auto k = triangle();
    const auto r = is_collapsible(k);
    REQUIRE(r.sequence);
    auto bad = *r.sequence;
    std::reverse(bad.steps.begin(), bad.steps.end());
    CHECK_FALSE(verify_collapse_sequence(k, bad));
    auto partial = *r.sequence;
    partial.steps.pop_back();
    CHECK_FALSE(verify_collapse_sequence(k, partial));
}

TEST_CASE("collapse search is deterministic given the seed")
{
    const auto& j = jester_hat();
    const auto a = sector_range(j, 0, 6);
    const auto sub = j.complex.with_simplices(face_closure(a));
    CollapseOptions o;
    o.seed = 42;
    const auto r1 = is_collapsible(sub, o);
    const auto r2 = is_collapsible(sub, o);
    REQUIRE(r1.sequence);
    REQUIRE(r2.sequence);
    CHECK(r1.sequence->steps == r2.sequence->steps);
    CHECK(verify_collapse_sequence(sub, *r1.sequence));
}

TEST_CASE("polygon builder")
{
    CHECK_THROWS_AS(polygon_identification_complex(IdentificationPolygon{}), DegenerateWord);

    const auto& d = dunce_hat();
    CHECK(d.complex.counts_by_dimension() == std::vector<std::size_t>{53, 160, 108});
    for (const auto& s : d.complex.simplices())
        if (s.size() == 2)
            CHECK(edge_degree(d.complex, s) >= 2);
    // Every vertex lies on an edge that is not free.
    for (int v = 0; v < static_cast<int>(d.complex.vertices().size()); ++v) {
        bool has_non_free = false;
        for (const auto& s : d.complex.simplices())
            if (s.size() == 2 && (s[0] == v || s[1] == v) && edge_degree(d.complex, s) >= 2)
                has_non_free = true;
        CHECK(has_non_free);
    }

    const auto& j = jester_hat();
    CHECK(euler_characteristic(j.complex) == 1);
    CHECK(j.half_sector_count == 12);
    CHECK(j.triangles.size() == 216);
    for (const auto& s : j.complex.simplices())
        if (s.size() == 2)
            CHECK(edge_degree(j.complex, s) >= 2);

    // One-sided words are subdivided until the result is simplicial.
    const auto disc = polygon_identification_complex(polygon({{"a", 1}}));
    CHECK(euler_characteristic(disc.complex) == 1);
    const auto proj = polygon_identification_complex(polygon({{"a", 1}, {"a", 1}}));
    CHECK(euler_characteristic(proj.complex) == 1);
    CHECK(is_collapsible(disc.complex).verdict == CollapseResult::Verdict::collapsible);
    CHECK(is_collapsible(proj.complex).verdict == CollapseResult::Verdict::not_collapsible);
}

TEST_CASE("split_check")
{
    SUBCASE("an edge split into itself")
    {
        const auto e = SimplicialComplex::from_named({"u", "v"}, {{"u", "v"}});
        const auto r = split_check(e, {{0, 1}}, {{0, 1}});
        CHECK(r.union_ok);
        CHECK(r.c == e);
        CHECK(r.all_collapsible());
    }
    SUBCASE("the Jester's hat cut through the cone point")
    {
        const auto& j = jester_hat();
        const auto r = split_check(j.complex, sector_range(j, 0, 6), sector_range(j, 6, 6));
        CHECK(r.union_ok);
        CHECK(r.all_collapsible());
        for (const auto* x : {&r.a_result, &r.b_result, &r.c_result}) {
            REQUIRE(x->sequence);
        }
        CHECK(verify_collapse_sequence(r.a, *r.a_result.sequence));
        CHECK(verify_collapse_sequence(r.b, *r.b_result.sequence));
        CHECK(verify_collapse_sequence(r.c, *r.c_result.sequence));
        CHECK(r.c.dimension() == 1);
    }
    SUBCASE("the dunce hat with B a vertex")
    {
        const auto& d = dunce_hat();
        const auto r = split_check(d.complex, d.triangles, {{0}});
        CHECK(r.union_ok);
        CHECK(r.a_result.verdict == CollapseResult::Verdict::not_collapsible);
        CHECK_FALSE(r.all_collapsible());
    }
    SUBCASE("simplices outside the complex are rejected")
    {
        CHECK_THROWS_AS(split_check(triangle(), {{0, 1, 2}}, {{0, 5}}), NotSubcomplex);
    }
}

TEST_CASE("sector split search")
{
    const auto splits = search_sector_splits(jester_hat());
    CHECK(splits.size() == 14);
    CHECK(std::any_of(splits.begin(), splits.end(), [](const SectorSplit& s) { return s.first == 0 && s.length == 6; }));
    for (const auto& s : splits)
        CHECK(s.report.all_collapsible());
    CHECK(search_sector_splits(dunce_hat()).empty());
}
