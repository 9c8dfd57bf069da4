#include "oracles.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace jester;

// Randomized invariant checks. Every suite runs at least 1000 cases from a
// fixed seed, so failures reproduce exactly.

namespace {

constexpr int cases = 1000;

// ---------------------------------------------------------------------------
// Hyperbolic

/// Generators of the (7, 2, 5) triangle group: the two rotations, the three
/// side reflections, and their inverses.
std::vector<hyperbolic::Isometry> triangle_group_letters()
{
    using namespace hyperbolic;
    const Real pi = hyperbolic::real_pi();
    const Triangle t = triangle_from_angles(pi / 7, pi / 2, pi / 5);
    std::vector<Isometry> g{rotation(t.c, -2 * pi / 5), rotation(t.a, -2 * pi / 7), reflect(t.bc), reflect(t.ac),
                            reflect(t.ab)};
    for (std::size_t i = 0, n = g.size(); i < n; ++i)
        g.push_back(g[i].inverse());
    return g;
}

// ---------------------------------------------------------------------------
// Complexes

/// Random 2-complex on up to 9 vertices: a few triangles plus a few extra
/// edges, closed under faces.
complexes::SimplicialComplex random_complex(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> nv(4, 9);
    const int n = nv(rng);
    std::uniform_int_distribution<int> vertex(0, n - 1);
    std::uniform_int_distribution<int> count(1, 8);
    std::vector<complexes::Simplex> maximal;
    for (int i = 0, k = count(rng); i < k; ++i) {
        complexes::Simplex s{vertex(rng), vertex(rng), vertex(rng)};
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        maximal.push_back(s);
    }
    for (int i = 0, k = count(rng) / 2; i < k; ++i) {
        complexes::Simplex s{vertex(rng), vertex(rng)};
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        maximal.push_back(s);
    }
    std::vector<std::string> names;
    for (int v = 0; v < n; ++v)
        names.push_back("v" + std::to_string(v));
    return complexes::SimplicialComplex::from_maximal(names, maximal);
}

bool closed_under_faces(const complexes::SimplicialComplex& k)
{
    for (const auto& s : k.simplices())
        if (s.size() > 1)
            for (std::size_t drop = 0; drop < s.size(); ++drop) {
                complexes::Simplex f = s;
                f.erase(f.begin() + static_cast<std::ptrdiff_t>(drop));
                if (!k.contains(f))
                    return false;
            }
    return true;
}

// ---------------------------------------------------------------------------
// Presentations

group::Presentation random_presentation(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> ngen(1, 4);
    std::uniform_int_distribution<int> nrel(0, 4);
    std::uniform_int_distribution<std::size_t> len(1, 8);
    std::vector<std::string> gens;
    for (int i = 0, n = ngen(rng); i < n; ++i)
        gens.push_back("g" + std::to_string(i));
    std::vector<group::Word> rels;
    for (int i = 0, n = nrel(rng); i < n; ++i)
        rels.push_back(group::free_reduce(testing::random_word(rng, len(rng), gens)));
    return {gens, rels};
}

std::vector<group::RelatorTerm> random_expression(std::mt19937_64& rng, const group::Presentation& p)
{
    std::uniform_int_distribution<std::size_t> which(0, p.relators().size() - 1);
    std::uniform_int_distribution<int> terms(1, 3);
    std::uniform_int_distribution<std::size_t> len(0, 3);
    std::bernoulli_distribution sign;
    std::vector<group::RelatorTerm> e;
    for (int i = 0, n = terms(rng); i < n; ++i)
        e.push_back({which(rng), testing::random_word(rng, len(rng), p.generators()), sign(rng) ? 1 : -1});
    return e;
}

/// One valid certified move chosen at random; `fresh` numbers new generators.
group::TietzeCertificate random_move(std::mt19937_64& rng, const group::Presentation& p, int& fresh)
{
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<std::size_t> len(0, 5);
    for (;;) {
        switch (kind(rng)) {
        case 0:
            return group::AddGenerator{"t" + std::to_string(fresh++), testing::random_word(rng, len(rng), p.generators())};
        case 1:
            // Any generator occurring exactly once in some relator can go.
            for (const auto& g : p.generators())
                for (const auto& r : p.relators())
                    if (std::count_if(r.begin(), r.end(), [&](const auto& l) { return l.generator == g; }) == 1)
                        return group::RemoveGenerator{g, std::nullopt};
            break;
        case 2:
            if (!p.relators().empty()) {
                auto e = random_expression(rng, p);
                return group::AddRelator{group::expand_expression(p, e), e};
            }
            break;
        case 3:
            // A relator already present twice can be dropped using its twin.
            for (std::size_t i = 0; i < p.relators().size(); ++i)
                for (std::size_t j = 0; j < p.relators().size(); ++j)
                    if (i != j && p.relators()[i] == p.relators()[j])
                        return group::RemoveRelator{i, {{j, {}, 1}}};
            // Otherwise duplicate a conjugate of a relator, then remove it.
            if (!p.relators().empty()) {
                std::uniform_int_distribution<std::size_t> which(0, p.relators().size() - 1);
                const std::size_t i = which(rng);
                const std::vector<group::RelatorTerm> e{{i, testing::random_word(rng, len(rng), p.generators()), 1}};
                return group::AddRelator{group::expand_expression(p, e), e};
            }
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// Free products

pro::FreeProduct mixed_free_product()
{
    using pro::FiniteGroup;
    return pro::FreeProduct({FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::symmetric3(),
                             FiniteGroup::cyclic(5), FiniteGroup::product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2))});
}

} // namespace

TEST_CASE("Lorentz form is conserved by products of up to 64 letters")
{
    const auto letters = triangle_group_letters();
    std::mt19937_64 rng(20240101);
    std::uniform_int_distribution<std::size_t> len(1, 64);
    std::uniform_int_distribution<std::size_t> pick(0, letters.size() - 1);
    double worst = 0;
    for (int c = 0; c < 10 * cases; ++c) {
        hyperbolic::Isometry m;
        for (std::size_t i = 0, n = len(rng); i < n; ++i)
            m = m * letters[pick(rng)];
        worst = std::max(worst, m.form_defect());
        worst = std::max(worst, m.inverse().form_defect());
    }
    INFO("worst defect " << worst);
    CHECK(worst <= 1e-9);
}

TEST_CASE("elementary collapses preserve the Euler characteristic and face closure")
{
    std::mt19937_64 rng(77);
    int collapses = 0;
    for (int c = 0; c < cases; ++c) {
        auto k = random_complex(rng);
        REQUIRE(closed_under_faces(k));
        const long chi = complexes::euler_characteristic(k);
        for (int step = 0; step < 12; ++step) {
            const auto pairs = complexes::free_faces(k);
            if (pairs.empty())
                break;
            std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
            const auto& pr = pairs[pick(rng)];
            k = complexes::elementary_collapse(k, pr.face, pr.coface);
            ++collapses;
            CHECK(complexes::euler_characteristic(k) == chi);
            CHECK(closed_under_faces(k));
        }
    }
    CHECK(collapses >= cases);
}

TEST_CASE("certified Tietze moves preserve the abelianization")
{
    std::mt19937_64 rng(4242);
    int moves = 0;
    for (int c = 0; c < cases; ++c) {
        group::Presentation p = random_presentation(rng);
        const auto invariants = group::abelianization(p);
        int fresh = 0;
        for (int step = 0; step < 5; ++step) {
            p = group::tietze_apply(p, random_move(rng, p, fresh));
            ++moves;
            REQUIRE(group::abelianization(p) == invariants);
        }
    }
    CHECK(moves == 5 * cases);
}

TEST_CASE("tampered Tietze certificates are rejected")
{
    std::mt19937_64 rng(99);
    for (int c = 0; c < cases; ++c) {
        group::Presentation p = random_presentation(rng);
        if (p.relators().empty())
            p = group::Presentation(p.generators(), {group::Word{{"g0", 1}, {"g0", 1}}});
        auto e = random_expression(rng, p);
        auto claimed = group::expand_expression(p, e);
        claimed.push_back({"g0", 1});
        CHECK_THROWS_AS(group::tietze_apply(p, group::AddRelator{claimed, e}), group::InvalidCertificate);
    }
}

TEST_CASE("free product normal forms are idempotent and multiplicative")
{
    const auto p = mixed_free_product();
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<std::size_t> len(0, 16);
    for (int c = 0; c < cases; ++c) {
        const auto u = testing::random_word(rng, p, len(rng));
        const auto v = testing::random_word(rng, p, len(rng));
        const auto w = testing::random_word(rng, p, len(rng));
        const auto nu = p.normal_form(u);
        CHECK(p.normal_form(nu) == nu);
        CHECK(nu.size() <= u.size());
        CHECK(pro::FreeProduct::is_normal(nu, p));
        CHECK(nu == testing::brute_reduce(p, u));

        pro::FreeProductWord uv = u;
        uv.insert(uv.end(), v.begin(), v.end());
        CHECK(p.multiply(nu, p.normal_form(v)) == p.normal_form(uv));
        CHECK(p.multiply(p.multiply(u, v), w) == p.multiply(u, p.multiply(v, w)));
    }
}

TEST_CASE("projection is a homomorphism")
{
    const auto p = mixed_free_product();
    std::mt19937_64 rng(8080);
    std::uniform_int_distribution<std::size_t> len(0, 16);
    std::uniform_int_distribution<std::size_t> keep(0, p.size());
    for (int c = 0; c < cases; ++c) {
        const auto u = testing::random_word(rng, p, len(rng));
        const auto v = testing::random_word(rng, p, len(rng));
        const std::size_t k = keep(rng);
        const auto lhs = p.normal_form(p.multiply(p.project(u, k), p.project(v, k)));
        const auto rhs = p.project(p.multiply(u, v), k);
        CHECK(lhs == rhs);
        for (const auto& s : rhs)
            CHECK(s.factor < k);
    }
}

TEST_CASE("free_reduce agrees with the cancellation oracle")
{
    std::mt19937_64 rng(5150);
    std::uniform_int_distribution<std::size_t> len(0, 64);
    for (int c = 0; c < cases; ++c) {
        const auto w = testing::random_word(rng, len(rng), {"a", "b"});
        const auto r = group::free_reduce(w);
        CHECK(r == testing::naive_reduce(w));
        CHECK(group::is_freely_reduced(r));
        CHECK(r.size() <= w.size());
        CHECK(group::free_reduce(r) == r);
    }
}
