#include "oracles.hpp"
#include "pool.hpp"

#include <doctest.h>

#include <random>

using namespace jester;
using namespace jester::pro;
using jester::testing::brute_reduce;
using jester::testing::random_word;

namespace {

const FiniteGroup z2 = FiniteGroup::cyclic(2);
const FiniteGroup z3 = FiniteGroup::cyclic(3);

FreeProduct z2_z3() { return FreeProduct({z2, z3}); }

} // namespace

TEST_CASE("finite groups are validated")
{
    CHECK_THROWS_AS(FiniteGroup("bad", {{0, 1}, {0, 1}}), MalformedGroup);
    CHECK_THROWS_AS(FiniteGroup("bad", {{0, 1}}), MalformedGroup);
    CHECK_THROWS_AS(FiniteGroup("bad", {{0, 2}, {1, 0}}), MalformedGroup);
    const auto s3 = FiniteGroup::symmetric3();
    CHECK(s3.order() == 6);
    CHECK_FALSE(s3.is_abelian());
    CHECK(FiniteGroup::product(z2, z3).is_abelian());
}

TEST_CASE("group isomorphism")
{
    const auto s3 = FiniteGroup::symmetric3();
    const auto iso = group_isomorphic(s3, s3);
    REQUIRE(iso);
    CHECK(is_homomorphism(s3, s3, *iso));
    CHECK_FALSE(group_isomorphic(FiniteGroup::cyclic(6), s3));
    CHECK_FALSE(group_isomorphic(FiniteGroup::product(z2, z2), FiniteGroup::cyclic(4)));
    const auto c6 = group_isomorphic(FiniteGroup::product(z2, z3), FiniteGroup::cyclic(6));
    REQUIRE(c6);
    CHECK(is_homomorphism(FiniteGroup::product(z2, z3), FiniteGroup::cyclic(6), *c6));
    CHECK(group_isomorphic(testing::relabelled_z4(), FiniteGroup::cyclic(4)));
    CHECK_THROWS_AS(group_isomorphic(FiniteGroup::cyclic(129), FiniteGroup::cyclic(129)), OrderTooLarge);
}

TEST_CASE("homomorphism enumeration")
{
    CHECK(all_homomorphisms(z2, z3).size() == 1);
    CHECK(all_homomorphisms(FiniteGroup::cyclic(4), FiniteGroup::cyclic(6)).size() == 2);
    CHECK(all_homomorphisms(FiniteGroup::symmetric3(), z2).size() == 2);
    CHECK(all_homomorphisms(z3, FiniteGroup::symmetric3()).size() == 3);
}

TEST_CASE("admissible factors")
{
    CHECK_FALSE(is_admissible_factor(FiniteGroup::cyclic(1)));
    CHECK(is_admissible_factor(z2));
    CHECK(is_admissible_factor(FiniteGroup::symmetric3()));
}

TEST_CASE("factor sequences")
{
    const FactorSequence s({z2, z3}, {{"Z2", std::nullopt}, {"Z3", 1}});
    CHECK(s.prefix(4) == std::vector<std::size_t>{0, 1, 0, 0});
    CHECK_FALSE(s.length());
    const FactorSequence f({z2, z3}, {{"Z2", 2}, {"Z3", 1}});
    CHECK(f.length() == 3u);
    CHECK(f.prefix(10).size() == 3);
    CHECK_THROWS_AS(FactorSequence({z2}, {{"Z2", 0}}), MalformedSequence);
    CHECK_THROWS_AS(FactorSequence({z2}, {{"Z7", 1}}), MalformedSequence);
    CHECK_THROWS_AS(FactorSequence({z2, z2}, {{"Z2", 1}}), MalformedSequence);
}

TEST_CASE("free product normal forms")
{
    const auto p = z2_z3();
    // a1 b1 b1^-1 a2 in Z2 * Z3 merges to a single syllable, here the identity.
    CHECK(p.normal_form({{0, 1}, {1, 1}, {1, 2}, {0, 1}}).empty());
    CHECK(p.normal_form({}).empty());
    CHECK(p.normal_form({{0, 1}, {1, 1}, {1, 1}}) == FreeProductWord{{0, 1}, {1, 2}});
    CHECK_THROWS_AS(p.check({{2, 0}}), InvalidSyllable);
    CHECK_THROWS_AS(p.check({{1, 3}}), InvalidSyllable);
    const FreeProductWord w{{0, 1}, {1, 2}};
    CHECK(p.multiply(w, p.inverse(w)).empty());
}

TEST_CASE("normal forms agree with syllable-at-a-time reduction")
{
    const FreeProduct p({z2, z3, FiniteGroup::symmetric3()});
    std::mt19937_64 rng(23);
    for (int i = 0; i < 1000; ++i) {
        const auto w = random_word(rng, p, 12);
        const auto n = p.normal_form(w);
        CHECK(n == brute_reduce(p, w));
        CHECK(FreeProduct::is_normal(n, p));
    }
}

TEST_CASE("projection kills the top factors")
{
    const FreeProduct p({z2, z3, z2});
    CHECK(p.project({{0, 1}, {1, 2}}, 2) == FreeProductWord{{0, 1}, {1, 2}});
    CHECK(p.project({{2, 1}}, 2).empty());
    // Mixed word: delete syllables of the killed factor, then reduce.
    CHECK(p.project({{0, 1}, {2, 1}, {0, 1}, {1, 1}}, 2) == FreeProductWord{{1, 1}});
    std::mt19937_64 rng(29);
    for (int i = 0; i < 300; ++i) {
        const auto w = p.normal_form(random_word(rng, p, 10));
        FreeProductWord kept;
        for (const auto& s : w)
            if (s.factor < 2)
                kept.push_back(s);
        CHECK(p.project(w, 2) == brute_reduce(p, kept));
    }
}

TEST_CASE("conjugate_into_factor")
{
    const auto p = z2_z3();
    const auto single = conjugate_into_factor(p, {{1, 2}});
    REQUIRE(single);
    CHECK(single->factor == 1);
    CHECK(single->conjugator.empty());

    const FreeProductWord g{{0, 1}, {1, 1}};
    const auto conj = p.multiply(p.multiply(g, {{0, 1}}), p.inverse(g));
    const auto r = conjugate_into_factor(p, conj);
    REQUIRE(r);
    CHECK(r->factor == 0);
    CHECK(p.multiply(p.multiply(r->conjugator, {{r->factor, r->element}}), p.inverse(r->conjugator)) ==
          p.normal_form(conj));

    CHECK_FALSE(conjugate_into_factor(p, {{0, 1}, {1, 1}}));
    // Confirm by enumeration: no short conjugate of a b lies in a factor.
    std::mt19937_64 rng(31);
    for (int i = 0; i < 200; ++i) {
        const auto c = p.normal_form(random_word(rng, p, 4));
        const auto x = p.multiply(p.multiply(c, {{0, 1}, {1, 1}}), p.inverse(c));
        CHECK(x.size() >= 2);
    }
}

TEST_CASE("pro-isomorphism decisions")
{
    const auto pool = testing::sequence_pool();
    for (const auto& a : pool) {
        for (const auto& b : pool) {
            const auto r = pro_isomorphic(a.sequence, b.sequence);
            INFO(a.name << " vs " << b.name);
            CHECK(r.decision == testing::multiset_oracle(a.sequence, b.sequence));
            CHECK(r.decision == pro_isomorphic(b.sequence, a.sequence).decision);
            if (r.decision) {
                CHECK_FALSE(r.distinguishing);
                const auto ladder = build_ladder_from_matching(a.sequence, b.sequence, r, 4);
                CHECK(ladder_verify(a.sequence, b.sequence, ladder, 4).holds);
            } else {
                REQUIRE(r.distinguishing);
                CHECK(r.distinguishing->in_a != r.distinguishing->in_b);
            }
        }
    }
}

TEST_CASE("the Z5 counterexample")
{
    const auto pool = testing::sequence_pool();
    const auto& a = pool[2].sequence;
    const auto& b = pool[3].sequence;
    const auto r = pro_isomorphic(a, b);
    CHECK_FALSE(r.decision);
    REQUIRE(r.distinguishing);
    CHECK(r.distinguishing->label == "Z5");
    CHECK_FALSE(r.distinguishing->in_a);
    CHECK(r.distinguishing->in_b == 0u);
    const auto refutation = refute_ladders(a, b, r);
    CHECK(refutation.outcome == RefutationResult::Outcome::refuted);
    CHECK(refutation.index_tuples > 0);
}

TEST_CASE("pro-isomorphism rejects the trivial group")
{
    const FactorSequence a({FiniteGroup::cyclic(1, "T")}, {{"T", 1}});
    CHECK_THROWS_AS(pro_isomorphic(a, a), InadmissibleFactor);
}

TEST_CASE("ladders")
{
    const auto pool = testing::sequence_pool();
    const auto& alt23 = pool[0].sequence;
    const auto& alt32 = pool[1].sequence;

    SUBCASE("identity ladder")
    {
        const auto r = pro_isomorphic(alt23, alt23);
        const auto l = build_ladder_from_matching(alt23, alt23, r, 3);
        CHECK(ladder_verify(alt23, alt23, l, 3).holds);
    }
    SUBCASE("shift ladder between the alternating sequences")
    {
        const auto r = pro_isomorphic(alt23, alt32);
        const auto l = build_ladder_from_matching(alt23, alt32, r, 4);
        CHECK(ladder_verify(alt23, alt32, l, 4).holds);
        const auto found = find_ladder(alt23, alt32, l.j, l.k);
        CHECK(found.ladder);
        CHECK(ladder_verify(alt23, alt32, *found.ladder, 4).holds);
    }
    SUBCASE("a factor sent to the wrong target breaks commutativity")
    {
        const auto r = pro_isomorphic(alt23, alt32);
        auto l = build_ladder_from_matching(alt23, alt32, r, 3);
        // Send the first factor of some u_i that has a second copy of its
        // target group available to that other copy.
        bool changed = false;
        for (std::size_t i = 0; i < l.up.size() && !changed; ++i) {
            const auto target = FreeProduct::truncation(alt23, l.j[i]);
            for (auto& img : l.up[i].images) {
                if (!img || changed)
                    continue;
                for (std::size_t t = 0; t < target.size(); ++t) {
                    if (t != img->target && target.factor(t).label() == target.factor(img->target).label()) {
                        img->target = t;
                        changed = true;
                        break;
                    }
                }
            }
        }
        REQUIRE(changed);
        const auto check = ladder_verify(alt23, alt32, l, 3);
        CHECK_FALSE(check.holds);
        CHECK_FALSE(check.failure.empty());
    }
    SUBCASE("malformed shapes are rejected")
    {
        Ladder bad;
        bad.j = {1};
        bad.k = {0};
        CHECK_THROWS_AS(ladder_verify(alt23, alt32, bad, 1), MalformedLadder);
    }
}

TEST_CASE("bounded refutation on every negative pair")
{
    const auto pool = testing::sequence_pool();
    for (const auto& a : pool)
        for (const auto& b : pool) {
            const auto r = pro_isomorphic(a.sequence, b.sequence);
            if (r.decision)
                continue;
            INFO(a.name << " vs " << b.name);
            CHECK(refute_ladders(a.sequence, b.sequence, r).outcome == RefutationResult::Outcome::refuted);
        }
}
