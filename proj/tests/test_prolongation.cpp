#include "corpus.hpp"
#include "prolong/forms.hpp"
#include "prolong/prolongation.hpp"
#include "random_systems.hpp"

#include <gtest/gtest.h>

#include <chrono>

using namespace prolong;
using prolong::testing::corpus;

namespace {

Var slot(const SystemSpec& s, unsigned i, unsigned j, unsigned u = 0) { return s.space.rank({MultiIndex{i, j}, u}); }

}  // namespace

TEST(Saturation, HrushovskiViolation) {
    auto sys = corpus("hrushovski.dsys");
    auto s = saturate(sys, 2);
    ASSERT_FALSE(s.ok);
    ASSERT_TRUE(s.violation.has_value());
    EXPECT_EQ(s.violation->layer, 2u);
    EXPECT_FALSE(s.violation->residue.is_zero());
    EXPECT_EQ(s.bindings.size(), 2u);
    auto nm = sys.namer();
    EXPECT_EQ(s.bindings[0].relation.to_string(nm), "-2*D1 c*c + D0 c");
    EXPECT_EQ(s.bindings[1].relation.to_string(nm), "D1 c - 1");
    bool saw = false;
    for (auto& st : s.violation->steps)
        if (st.derivation == 1 && st.relation.to_string(nm) == "-c^2 + D0 a") {
            EXPECT_EQ(st.equation.to_string(nm), "-2*D1 c*c + D0 D1 a");
            saw = true;
        }
    EXPECT_TRUE(saw);
    // height 1 sees nothing
    EXPECT_TRUE(saturate(sys, 1).ok);
}

TEST(Saturation, SolubleExamples) {
    auto my = corpus("periodic.dsys");
    auto s = saturate(my, 5);
    EXPECT_TRUE(s.ok);
    ASSERT_EQ(s.bindings.size(), 2u);
    EXPECT_EQ(s.bindings[0].relation.to_string(my.namer()), "D1^3 x - x");
    EXPECT_EQ(s.bindings[0].layer, 4u);
    EXPECT_EQ(s.bindings[1].relation.to_string(my.namer()), "D0^2 x - D1 x");
    EXPECT_EQ(s.bindings[1].layer, 5u);

    auto sec = corpus("fgh.dsys");
    auto t = saturate(sec, 6);
    ASSERT_TRUE(t.ok);
    EXPECT_EQ(t.tower.var(slot(sec, 2, 1)), t.tower.var(slot(sec, 0, 3)));
    EXPECT_EQ(t.tower.var(slot(sec, 3, 0)), t.tower.var(slot(sec, 2, 0)));
}

TEST(Saturation, DifferentialCondition) {
    EXPECT_FALSE(differential_condition(corpus("periodic_shifted.dsys"), 6));
    EXPECT_TRUE(differential_condition(corpus("fgh.dsys"), 6));
    EXPECT_TRUE(differential_condition(parse_system("char: 0\nderivations: 2\nunknowns: x\n"), 4));
    auto s = saturate(corpus("periodic_shifted.dsys"), 6);
    ASSERT_EQ(s.log.size(), 3u);
    EXPECT_EQ(s.log.back().event, "violation");
}

TEST(Saturation, Hypotheses) {
    auto my = corpus("periodic.dsys"), sec = corpus("fgh.dsys"), ak = corpus("single_leader.dsys");
    EXPECT_TRUE(hypothesis_thm1(my, 3));
    EXPECT_TRUE(hypothesis_thm1(sec, 3));
    EXPECT_FALSE(hypothesis_thm1(sec, 2));
    EXPECT_TRUE(hypothesis_thm2(ak, MultiIndex{3, 0}));
    EXPECT_TRUE(hypothesis_thm2(sec, MultiIndex{3, 3}));
    EXPECT_FALSE(hypothesis_thm2(sec, MultiIndex{3, 0}));
    EXPECT_THROW(hypothesis_thm2(sec, MultiIndex{3}), std::invalid_argument);
    EXPECT_TRUE(hypothesis_thm3(sec, 3));
    EXPECT_FALSE(hypothesis_thm1(corpus("periodic_shifted.dsys"), 3));
    // thm1 at r implies the differential condition beyond 2r
    EXPECT_TRUE(saturate(my, 8).ok);
    EXPECT_TRUE(saturate(sec, 8).ok);
}

TEST(Saturation, Commutators) {
    auto sec = corpus("fgh.dsys");
    auto s = saturate(sec, 5);
    ASSERT_TRUE(s.ok);
    DerivationTable tab(s.tower);
    EXPECT_TRUE(commutator_check(tab, 5).empty());
    DerivationTable bad(s.tower);
    Var x00 = slot(sec, 0, 0);
    bad.override_value(0, x00, s.tower.add(s.tower.var(slot(sec, 1, 0)), s.tower.var(x00)));
    auto fails = commutator_check(bad, 5);
    ASSERT_FALSE(fails.empty());
    EXPECT_EQ(fails[0].slot, (DerivIndex{MultiIndex{0, 0}, 0}));
}

TEST(Saturation, Monotone) {
    for (const char* f : {"fgh.dsys", "periodic.dsys", "hrushovski.dsys", "charp3.dsys"}) {
        auto sys = corpus(f);
        auto s1 = saturate(sys, 3);
        if (!s1.ok) continue;
        auto s2 = saturate_relations(sys.space, sys.characteristic, s1.stored, 5, {}, s1.bindings);
        if (!s2.ok) continue;
        for (auto& [v, sl] : s1.tower.slots()) EXPECT_TRUE(s2.tower.nf(sl.relation).is_zero()) << f;
    }
}

TEST(Saturation, TopLayerLeadersSeparable) {
    for (const char* f : {"charp2.dsys", "charp3.dsys", "charp5.dsys", "fgh.dsys"}) {
        auto sys = corpus(f);
        for (unsigned H : {2u, 3u, 4u}) {
            auto s = saturate(sys, H);
            ASSERT_TRUE(s.ok);
            for (auto& [v, c] : classify_leaders(s.tower).classes)
                if (sys.space.height_of(v) == H) { EXPECT_NE(c, LeaderClass::Inseparable) << f; }
        }
    }
}

TEST(Saturation, SizeGuard) {
    auto sys = parse_system("char: 0\nderivations: 3\nunknowns: x y\nD0 D1 y = y^2\nD0^2 D2 y = D1^3 y*D1 x + 1\n");
    SaturateOptions o;
    o.max_terms = 50;
    EXPECT_THROW(saturate(sys, 5, o), SaturationLimit);
}

TEST(Saturation, RandomSystemsCommute) {
    std::mt19937 rng(2024);
    int ok = 0, tried = 0;
    auto t0 = std::chrono::steady_clock::now();
    const unsigned H = 6;
    while (ok < 50 && tried < 400) {
        ++tried;
        auto sys = prolong::testing::random_solved_system(rng);
        Saturation s;
        try {
            s = saturate(sys, H);
        } catch (const SaturationLimit&) {
            continue;
        } catch (const ZeroDivisor&) {
            continue;
        }
        if (!s.ok) continue;
        DerivationTable tab(s.tower);
        EXPECT_TRUE(commutator_check(tab, H).empty()) << serialize_system(sys);
        unsigned m = sys.m();
        for (Var v = 0; v < sys.space.slots_upto(H - 2); ++v) {
            Form f = Form::scalar(m, s.tower.var(v));
            EXPECT_TRUE(exterior_d(tab, exterior_d(tab, f)).is_zero()) << serialize_system(sys);
        }
        ++ok;
    }
    EXPECT_GE(ok, 50);
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 120.0);
}
