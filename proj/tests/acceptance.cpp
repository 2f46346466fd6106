// Prints one PASS/FAIL line per acceptance criterion.

#include "corpus.hpp"
#include "prolong.hpp"
#include "random_systems.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

using namespace prolong;
using prolong::testing::corpus;
using nlohmann::json;

namespace {

int failures = 0;

struct Check {
    bool ok = true;
    std::string first;
    void operator()(bool cond, const std::string& what) {
        if (!cond && ok) first = what;
        ok = ok && cond;
    }
};

void criterion(int n, const char* name, double limit_s, const std::function<void(Check&)>& body) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c(false, std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c(s < limit_s, "runtime " + std::to_string(s) + " s over the " + std::to_string(limit_s) + " s limit");
    std::printf("%s %d: %s (%.3f s, limit %.0f s)%s%s\n", c.ok ? "PASS" : "FAIL", n, name, s, limit_s, c.ok ? "" : " -- ", c.first.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
}

bool has_line(const Explanation& e, const std::string& l) {
    for (auto& x : e.lines)
        if (x == l) return true;
    return false;
}

Tower presentation_tower(const SystemSpec& s) {
    std::vector<std::pair<DerivIndex, Poly>> rels;
    for (auto& e : s.equations) rels.push_back({e.leader, e.poly});
    return build_tower(Presentation{s.space, s.characteristic, s.max_height(), rels});
}

}  // namespace

int main() {
    criterion(1, "Hrushovski counterexample is insoluble with the expected trace", 1, [](Check& c) {
        auto sys = corpus("hrushovski.dsys");
        auto v = decide(sys);
        c(v.kind == Verdict::Insoluble, "verdict");
        if (!v.sat.violation) return c(false, "no violation");
        auto nm = sys.namer();
        auto& steps = v.sat.violation->steps;
        c(steps.back().equation.to_string(nm) == "D0 D1 c - 2*D1 c", "clash equation");
        c(steps.back().reduced.to_string(nm) == "-2", "clash residue");
        bool d0 = false;
        for (auto& s : steps)
            if (s.relation.to_string(nm) == "D1 c - 1" && s.derivation == 0) d0 = s.reduced.to_string(nm) == "D0 D1 c";
        c(d0, "D0 of D1 c - 1 reduces to D0 D1 c");
        auto e = explain(v);
        c(has_line(e, "value: ∂0c = 2*c"), "value of ∂0c");
        c(has_line(e, "value: ∂1c = 1"), "value of ∂1c");
        c(e.lines.back() == "so ∂1∂0c = 2 but ∂0∂1c = 0", "final clash line");
    });

    criterion(2, "periodic_shifted binds (0,3) to (0,0), then (2,0) to (0,1), then 0 = 1", 5, [](Check& c) {
        auto sys = corpus("periodic_shifted.dsys");
        auto v = decide(sys);
        c(v.kind == Verdict::Insoluble, "verdict");
        auto nm = sys.namer();
        auto& log = v.sat.log;
        c(log.size() == 3, "three log entries");
        if (log.size() != 3) return;
        c(log[0].event == "binding" && log[0].binding->to_string(nm) == "D1^3 x - x", "first binding");
        c(log[1].event == "binding" && log[1].binding->to_string(nm) == "D0^2 x - D1 x", "second binding");
        c(log[2].event == "violation", "violation");
        c(v.sat.violation && v.sat.violation->residue == Scalar(-1, 0), "residue -1, i.e. 0 = 1");
    });

    criterion(3, "periodic is soluble with r = 3 and the expected triangle", 5, [](Check& c) {
        auto sys = corpus("periodic.dsys");
        auto v = decide(sys);
        c(v.kind == Verdict::Soluble && v.r == 3, "verdict and r");
        auto s = saturate(sys, 5);
        c(s.ok, "saturation to height 5");
        c(picture_text(render_triangle(s.tower, 0, 5)) == "a b c a b c\nd e f d e\nb c a b\ne f d\nc a\nf\n", "triangle");
    });

    criterion(4, "{f,g,h} is soluble with r = 3, leaders {(1,1),(0,3),(3,0)} and the expected triangles", 5, [](Check& c) {
        auto sys = corpus("fgh.dsys");
        auto v = decide(sys);
        c(v.kind == Verdict::Soluble && v.r == 3, "verdict and r");
        std::vector<DerivIndex> want{{MultiIndex{1, 1}, 0}, {MultiIndex{0, 3}, 0}, {MultiIndex{3, 0}, 0}};
        c(v.leaders.all_minimal() == want, "minimal separable leaders");
        c(picture_text(render_triangle(presentation_tower(sys), 0, 3)) == "* * a b\n* a *\nb c\nc\n", "presentation triangle");
        auto s = saturate(sys, 6);
        c(picture_text(render_triangle(s.tower, 0, 6)) == "* * a b b b b\n* a b b b b\nb b b b b\nb b b b\nb b b\nb b\nb\n",
          "saturated triangle");
        const Space& sp = sys.space;
        c(s.tower.var(sp.rank({MultiIndex{2, 1}, 0})) == s.tower.var(sp.rank({MultiIndex{0, 3}, 0})), "(2,1) = (0,3)");
    });

    criterion(5, "char-p example for p = 2, 3, 5", 5, [](Check& c) {
        for (const char* f : {"charp2.dsys", "charp3.dsys", "charp5.dsys"}) {
            auto sys = corpus(f);
            std::string p = std::to_string(sys.characteristic);
            auto s = saturate(sys, 2);
            c(s.ok && differential_condition(sys, 2), std::string(f) + " differential condition");
            auto rep = classify_leaders(s.tower);
            const Space& sp = sys.space;
            c(rep.classes.count(sp.rank({MultiIndex{1, 0}, 0})) && rep.classes.at(sp.rank({MultiIndex{1, 0}, 0})) == LeaderClass::Inseparable,
              std::string(f) + " (1,0) inseparable");
            for (auto& [slot, cls] : rep.classes)
                if (sp.height_of(slot) == 2) c(cls != LeaderClass::Inseparable, std::string(f) + " height-2 generator inseparable");
            std::string bp = "b^" + p + " + a";
            c(render_values(s.tower, 0, 2) == Picture{{"a", bp, bp}, {"b", "b"}, {"c"}}, std::string(f) + " triangle");
        }
    });

    criterion(6, "commutation invariant on 50 random saturated systems", 120, [](Check& c) {
        std::mt19937 rng(2024);
        int ok = 0, tried = 0;
        while (ok < 50 && tried < 400) {
            ++tried;
            auto sys = prolong::testing::random_solved_system(rng);
            Saturation s;
            try {
                s = saturate(sys, 6);
            } catch (const SaturationLimit&) {
                continue;
            } catch (const ZeroDivisor&) {
                continue;
            }
            if (!s.ok) continue;
            DerivationTable tab(s.tower);
            c(commutator_check(tab, 6).empty(), "commutator on\n" + serialize_system(sys));
            for (Var v = 0; v < sys.space.slots_upto(4); ++v)
                c(exterior_d(tab, exterior_d(tab, Form::scalar(sys.m(), s.tower.var(v)))).is_zero(), "d d on\n" + serialize_system(sys));
            ++ok;
        }
        c(ok >= 50, "only " + std::to_string(ok) + " systems saturated");
    });

    criterion(7, "Hrushovski commutation system is soluble while decide is insoluble", 1, [](Check& c) {
        auto sys = corpus("hrushovski.dsys");
        auto fo = first_order_reduction(sys);
        c(!linsolve(commutation_system(fo).lin, TowerOps{&fo.tower}).inconsistent, "linsolve");
        c(decide(sys).kind == Verdict::Insoluble, "decide");
    });

    criterion(8, "brute-force chains stay within the chain bound", 300, [](Check& c) {
        c(max_antichain_size(2, 1, 3) == 4, "antichain (2,1,3)");
        c(max_antichain_size(2, 2, 1) == 4, "antichain (2,2,1)");
        c(brute_force_max_chain(ChainSpec::constant(1, 1, 3), 8).length == 2, "chain m=1");
        c(brute_force_max_chain(ChainSpec::constant(2, 1, 1), 8).length == 3, "chain a=1");
        c(brute_force_max_chain(ChainSpec::prefix(2, 1, {1, 2, 3}), 8).length == 4, "chain a=1,2,3");
        auto sb = thm_s_bound(2, 1, 1);
        c(sb.t == 6 && sb.s == 64, "s bound (2,1,1)");
        std::vector<std::vector<unsigned>> rules{{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {2, 1}, {3, 2}, {1, 2, 3}, {3, 2, 1}, {2, 1, 3}};
        for (unsigned m = 1; m <= 2; ++m)
            for (unsigned n = 1; n <= 2; ++n)
                for (auto& r : rules) {
                    auto spec = ChainSpec::prefix(m, n, r);
                    c(brute_force_max_chain(spec, 8).length <= chain_bound(spec), "bound (" + std::to_string(m) + "," + std::to_string(n) + ")");
                }
    });

    criterion(9, "orderly ranking: first elements for m = 2, 3 and isomorphism with N", 5, [](Check& c) {
        auto e2 = enumerate_upto(2, 1, 2);
        std::vector<DerivIndex> w2{{MultiIndex{0, 0}, 0}, {MultiIndex{0, 1}, 0}, {MultiIndex{1, 0}, 0},
                                   {MultiIndex{0, 2}, 0}, {MultiIndex{1, 1}, 0}, {MultiIndex{2, 0}, 0}};
        c(e2 == w2, "m = 2");
        std::vector<DerivIndex> h2;
        for (auto& d : enumerate_upto(3, 1, 2))
            if (height(d.index) == 2) h2.push_back(d);
        std::vector<DerivIndex> w3{{MultiIndex{0, 0, 2}, 0}, {MultiIndex{0, 1, 1}, 0}, {MultiIndex{0, 2, 0}, 0},
                                   {MultiIndex{1, 0, 1}, 0}, {MultiIndex{1, 1, 0}, 0}, {MultiIndex{2, 0, 0}, 0}};
        c(h2 == w3, "m = 3");
        for (unsigned m : {2u, 3u}) {
            Space sp(m, 1);
            for (std::uint64_t r = 1; r < 10000; ++r) {
                if (sp.rank(sp.unrank(r)) != r) return c(false, "rank/unrank");
                if (orderly_compare(sp.unrank(r - 1), sp.unrank(r)) != std::strong_ordering::less) return c(false, "order");
            }
        }
    });

    criterion(10, "certificates replay and every single-field mutation fails", 60, [](Check& c) {
        std::size_t mutations = 0;
        for (const char* f : {"hrushovski.dsys", "periodic_shifted.dsys", "periodic.dsys", "fgh.dsys", "single_leader.dsys", "charp2.dsys", "charp3.dsys", "charp5.dsys"}) {
            auto v = decide(corpus(f));
            json cert = certificate(v);
            c(replay_certificate(cert).ok, std::string(f) + " replay");
            json flat = cert.flatten();
            for (auto& [ptr, val] : flat.items()) {
                json m = flat;
                if (val.is_number_unsigned()) m[ptr] = val.get<std::uint64_t>() + 1;
                else if (val.is_number_integer()) m[ptr] = val.get<std::int64_t>() + 1;
                else if (val.is_string()) m[ptr] = val.get<std::string>() + "1";
                else if (val.is_null()) m[ptr] = 0;
                else continue;
                ++mutations;
                c(!replay_certificate(m.unflatten()).ok, std::string(f) + " mutation at " + ptr);
            }
        }
        c(mutations >= 100, "too few mutations");
        std::printf("  %zu mutations\n", mutations);
    });

    return failures == 0 ? 0 : 1;
}
