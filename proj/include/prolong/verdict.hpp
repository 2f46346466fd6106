#pragma once

// The solubility decision: saturate to twice the current leader bound, grow
// the bound while new minimal separable leaders appear, and emit a
// replayable certificate for Soluble and Insoluble outcomes.

#include "json_io.hpp"
#include "prolongation.hpp"

#include <string>
#include <vector>

namespace prolong {

enum class Variant { Thm1, Thm2, Thm3 };

inline const char* to_string(Variant v) {
    switch (v) {
        case Variant::Thm1: return "thm1";
        case Variant::Thm2: return "thm2";
        case Variant::Thm3: return "thm3";
    }
    return "?";
}

inline Variant variant_from_string(const std::string& s) {
    if (s == "thm1") return Variant::Thm1;
    if (s == "thm2") return Variant::Thm2;
    if (s == "thm3") return Variant::Thm3;
    throw std::invalid_argument("unknown variant '" + s + "'");
}

struct DecideOptions {
    unsigned max_height = 32;
    Variant variant = Variant::Thm1;
    SaturateOptions saturate;
};

struct Round {
    unsigned index = 0;
    unsigned r = 0;       // bound tested in this round (|mu| for thm2)
    unsigned height = 0;  // saturation height
    bool ok = false;
    std::vector<DerivIndex> minimal;  // minimal separable leaders found
    std::size_t bindings = 0;         // bindings known after the round
};

struct Verdict {
    enum Kind { Soluble, Insoluble, Undecided } kind = Undecided;
    Variant variant = Variant::Thm1;
    SystemSpec system;
    unsigned r = 0;
    std::optional<MultiIndex> mu;
    Saturation sat;  // the final saturation
    LeaderReport leaders;
    std::vector<Round> rounds;
    std::string reason;                     // Undecided
    std::optional<DerivIndex> growth;       // leader that forced the last growth
    std::vector<std::string> notes;
};

inline const char* to_string(Verdict::Kind k) {
    switch (k) {
        case Verdict::Soluble: return "Soluble";
        case Verdict::Insoluble: return "Insoluble";
        case Verdict::Undecided: return "Undecided";
    }
    return "?";
}

namespace detail {

inline std::optional<DerivIndex> highest_leader(const LeaderReport& rep) {
    std::optional<DerivIndex> best;
    for (auto& d : rep.all_minimal())
        if (!best || height(d.index) > height(best->index)) best = d;
    return best;
}

inline Saturation resaturate(const SystemSpec& sys, const Saturation* prev, unsigned H, const SaturateOptions& opt) {
    if (!prev) return saturate(sys, H, opt);
    return saturate_relations(sys.space, sys.characteristic, prev->stored, H, opt, prev->bindings);
}

}  // namespace detail

inline Verdict decide(const SystemSpec& sys, const DecideOptions& opt = {}) {
    Verdict v;
    v.system = sys;
    v.variant = opt.variant;
    const unsigned hin = sys.max_height();
    std::optional<Saturation> prev;
    auto finish_undecided = [&](const std::string& why) {
        v.kind = Verdict::Undecided;
        v.reason = why;
        return v;
    };
    try {
        unsigned r = std::max(1u, hin / 2 + 1);
        unsigned H = opt.variant == Variant::Thm2 ? std::max(hin, 1u) : 2 * r;
        for (unsigned round = 0;; ++round) {
            if (H > opt.max_height) {
                Saturation s = detail::resaturate(sys, prev ? &*prev : nullptr, opt.max_height, opt.saturate);
                v.rounds.push_back({round, r, opt.max_height, s.ok, classify_leaders(s.tower).all_minimal(), s.bindings.size()});
                v.sat = std::move(s);
                v.leaders = classify_leaders(v.sat.tower);
                if (!v.sat.ok) {
                    v.kind = Verdict::Insoluble;
                    return v;
                }
                return finish_undecided("height cap " + std::to_string(opt.max_height) + " reached with r = " + std::to_string(r));
            }
            Saturation s = detail::resaturate(sys, prev ? &*prev : nullptr, H, opt.saturate);
            LeaderReport rep = classify_leaders(s.tower);
            v.rounds.push_back({round, opt.variant == Variant::Thm2 ? H : r, H, s.ok, rep.all_minimal(), s.bindings.size()});
            if (!s.ok) {
                v.kind = Verdict::Insoluble;
                v.sat = std::move(s);
                v.leaders = rep;
                v.r = r;
                return v;
            }
            bool done = false;
            if (opt.variant == Variant::Thm1) {
                unsigned rp = rep.max_minimal_height();
                if (rp <= r) done = true;
                else {
                    v.growth = detail::highest_leader(rep);
                    r = rp;
                    H = 2 * r;
                }
            } else if (opt.variant == Variant::Thm3) {
                if (leaders_thm3(rep, r, sys.m())) {
                    done = true;
                    if (!leaders_within(rep, r)) v.notes.push_back("decided by the join clause: some unknown has a minimal separable leader above r");
                } else {
                    v.growth = detail::highest_leader(rep);
                    ++r;
                    H = 2 * r;
                }
            } else {
                MultiIndex mu(sys.m());
                for (auto& d : rep.all_minimal()) mu = join(mu, d.index);
                if (height(mu) <= H) {
                    mu[0] += H - height(mu);
                    v.mu = mu;
                    done = true;
                } else {
                    v.growth = detail::highest_leader(rep);
                    H = height(mu);
                }
                r = H;
            }
            if (done) {
                v.kind = Verdict::Soluble;
                v.r = r;
                v.sat = std::move(s);
                v.leaders = rep;
                return v;
            }
            prev = std::move(s);
        }
    } catch (const SaturationLimit& e) {
        return finish_undecided(e.what());
    } catch (const ZeroDivisor& e) {
        return finish_undecided(std::string("non-generic presentation: ") + e.what());
    } catch (const Unsupported& e) {
        return finish_undecided(std::string("unsupported: ") + e.what());
    } catch (const std::overflow_error& e) {
        return finish_undecided(e.what());
    } catch (const std::out_of_range& e) {
        return finish_undecided(e.what());
    }
}

// ---------------------------------------------------------------------------
// Certificates

namespace detail {

inline json trace_step_to_json(const TraceStep& s) {
    return {{"source", s.source ? json(*s.source) : json(nullptr)},
            {"relation", poly_to_json(s.relation)},
            {"derivation", s.derivation},
            {"equation", poly_to_json(s.equation)},
            {"reduced", poly_to_json(s.reduced)}};
}

inline json leaders_to_json(const std::vector<DerivIndex>& ls) {
    json a = json::array();
    for (auto& d : ls) a.push_back(index_to_json(d));
    return a;
}

}  // namespace detail

/// Structured, numeric certificate; empty for Undecided.
inline json certificate(const Verdict& v) {
    if (v.kind == Verdict::Undecided) return nullptr;
    json c;
    c["system"] = system_to_json(v.system);
    c["variant"] = to_string(v.variant);
    json bs = json::array();
    for (auto& b : v.sat.bindings) bs.push_back({{"relation", poly_to_json(b.relation)}, {"round", b.round}, {"layer", b.layer}});
    c["bindings"] = bs;
    if (v.kind == Verdict::Insoluble) {
        const Violation& x = *v.sat.violation;
        c["kind"] = "insoluble";
        json steps = json::array();
        for (auto& s : x.steps) steps.push_back(detail::trace_step_to_json(s));
        c["clash"] = {{"round", x.round}, {"layer", x.layer}, {"steps", steps}, {"residue", x.residue.to_string()}};
    } else {
        c["kind"] = "soluble";
        c["height"] = v.sat.height;
        if (v.variant == Variant::Thm2) c["mu"] = v.mu->entries();
        else c["r"] = v.r;
        json w = json::array();
        for (auto& [slot, s] : v.sat.tower.slots()) w.push_back({{"slot", slot}, {"relation", poly_to_json(s.relation)}});
        c["witness"] = w;
        c["minimal_leaders"] = detail::leaders_to_json(v.leaders.all_minimal());
    }
    return c;
}

struct ReplayResult {
    bool ok = false;
    std::string reason;
};

namespace detail {

inline void require(bool cond, const std::string& why) {
    if (!cond) throw CertificateError(why);
}

inline unsigned get_uint(const json& j, const char* key) {
    require(j.is_object() && j.contains(key) && j.at(key).is_number_unsigned(), std::string("missing or invalid '") + key + "'");
    return j.at(key).get<unsigned>();
}

inline std::vector<Binding> bindings_from_json(const json& c, const SystemSpec& sys) {
    std::vector<Binding> out;
    require(c.contains("bindings") && c.at("bindings").is_array(), "missing bindings");
    for (auto& b : c.at("bindings")) {
        require(b.is_object() && b.size() == 3, "malformed binding");
        unsigned layer = get_uint(b, "layer");
        Binding x{poly_from_json(b.at("relation"), sys.characteristic), get_uint(b, "round"), layer, layer};
        out.push_back(x);
    }
    return out;
}

/// Each binding must be what one pass produces from the inputs and the
/// earlier bindings.
inline std::vector<Poly> replay_bindings(const SystemSpec& sys, const std::vector<Binding>& bs) {
    std::vector<Poly> stored = input_relations(sys);
    for (std::size_t k = 0; k < bs.size(); ++k) {
        const Binding& b = bs[k];
        require(b.round == k, "binding rounds are not consecutive");
        require(b.layer <= kMaxHeight, "binding layer out of range");
        // a pass stops at its first binding, so targeting the binding's layer reproduces it
        auto po = run_pass(sys.space, sys.characteristic, stored, b.layer, {});
        require(po.kind == LayerOutcome::Bound, "binding " + std::to_string(k) + " is not produced by its pass");
        require(po.layer == b.layer, "binding " + std::to_string(k) + " appears at a different layer");
        require(po.detail.binding == b.relation, "binding " + std::to_string(k) + " differs from the recomputed one");
        stored.push_back(b.relation);
    }
    return stored;
}

/// Independent check of one trace step's derivation.
inline void check_step(const TraceStep& s, const Space& sp) {
    if (s.derivation < 0) {
        require(!s.source && s.equation == s.relation, "stored-relation step does not restate its relation");
        return;
    }
    require(static_cast<unsigned>(s.derivation) < sp.m(), "derivation index out of range");
    require(s.source.has_value(), "differentiated step without a source slot");
    require(s.relation.max_var() == s.source, "step relation does not have its source as leader");
    require(differentiate(s.relation, static_cast<unsigned>(s.derivation), sp) == s.equation, "step equation is not the derivative of its relation");
}

inline ReplayResult replay_insoluble(const json& c, const SystemSpec& sys) {
    auto bs = bindings_from_json(c, sys);
    require(c.size() == 5, "unexpected certificate fields");
    const json& k = c.at("clash");
    require(k.is_object() && k.size() == 4, "malformed clash");
    unsigned layer = get_uint(k, "layer"), round = get_uint(k, "round");
    require(layer <= kMaxHeight, "clash layer out of range");
    const unsigned H = layer;
    require(round == bs.size(), "clash round does not follow the bindings");
    std::vector<TraceStep> steps;
    require(k.at("steps").is_array() && !k.at("steps").empty(), "clash has no steps");
    for (auto& s : k.at("steps")) {
        require(s.is_object() && s.size() == 5, "malformed step");
        TraceStep t;
        if (!s.at("source").is_null()) {
            require(s.at("source").is_number_unsigned(), "invalid step source");
            t.source = s.at("source").get<Var>();
        }
        require(s.at("derivation").is_number_integer(), "invalid derivation");
        t.derivation = s.at("derivation").get<int>();
        t.relation = poly_from_json(s.at("relation"), sys.characteristic);
        t.equation = poly_from_json(s.at("equation"), sys.characteristic);
        t.reduced = poly_from_json(s.at("reduced"), sys.characteristic);
        check_step(t, sys.space);
        steps.push_back(std::move(t));
    }
    require(k.at("residue").is_string(), "invalid residue");
    Scalar residue = Scalar::parse(k.at("residue").get<std::string>(), sys.characteristic);
    require(!residue.is_zero() && residue.to_string() == k.at("residue").get<std::string>(), "residue is not a canonical nonzero constant");
    require(steps.back().reduced == Poly(residue), "last step does not reduce to the residue");
    auto stored = replay_bindings(sys, bs);
    auto po = run_pass(sys.space, sys.characteristic, stored, H, {});
    require(po.kind == LayerOutcome::Clash, "recomputed pass does not end in a contradiction");
    require(po.layer == layer, "contradiction appears at a different layer");
    require(po.detail.residue == residue, "recomputed residue differs");
    require(po.detail.steps.size() == steps.size(), "recomputed clash layer has a different number of steps");
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const auto& a = po.detail.steps[i];
        const auto& b = steps[i];
        require(a.source == b.source && a.derivation == b.derivation && a.relation == b.relation && a.equation == b.equation &&
                    a.reduced == b.reduced,
                "step " + std::to_string(i) + " differs from the recomputed trace");
    }
    return {true, "contradiction reproduced at layer " + std::to_string(layer)};
}

inline ReplayResult replay_soluble(const json& c, const SystemSpec& sys) {
    auto bs = bindings_from_json(c, sys);
    require(c.size() == 8, "unexpected certificate fields");
    Variant var = variant_from_string(c.at("variant").get<std::string>());
    unsigned H = get_uint(c, "height");
    require(H <= kMaxHeight, "height out of range");
    require(H >= sys.max_height(), "witness does not reach the input equations");
    unsigned r = 0;
    MultiIndex mu(sys.m());
    if (var == Variant::Thm2) {
        require(c.contains("mu") && c.at("mu").is_array(), "missing mu");
        mu = MultiIndex(c.at("mu").get<std::vector<unsigned>>());
        require(mu.size() == sys.m() && height(mu) == H, "mu does not match the witness height");
    } else {
        r = get_uint(c, "r");
        require(r >= 1 && H == 2 * r, "witness height is not 2r");
        require(2 * r > sys.max_height(), "2r does not exceed the input height");
    }
    // Build the witness tower directly from its relations.
    Tower t(sys.space, sys.characteristic);
    std::vector<std::pair<Var, Poly>> rels;
    require(c.at("witness").is_array(), "malformed witness");
    for (auto& w : c.at("witness")) {
        require(w.is_object() && w.size() == 2 && w.at("slot").is_number_unsigned(), "malformed witness entry");
        Var v = w.at("slot").get<Var>();
        require(sys.space.height_of(v) <= H, "witness slot above its height");
        Poly rel = poly_from_json(w.at("relation"), sys.characteristic);
        require(rel.max_var() == v, "witness relation does not have its slot as leader");
        require(rels.empty() || rels.back().first < v, "witness slots out of order");
        require(t.install(v, rel).installed, "witness relation collapses below its leader");
        rels.push_back({v, rel});
    }
    for (auto& e : sys.equations) require(t.nf(e.poly).is_zero(), "an input equation fails in the witness");
    for (auto& b : bs) require(t.nf(b.relation).is_zero(), "a binding fails in the witness");
    for (auto& [v, rel] : rels) {
        if (sys.space.height_of(v) >= H) continue;
        for (unsigned i = 0; i < sys.m(); ++i)
            require(t.nf(differentiate(rel, i, sys.space)).is_zero(), "differential condition fails for a witness relation");
    }
    LeaderReport rep = classify_leaders(t);
    json ml = leaders_to_json(rep.all_minimal());
    require(ml == c.at("minimal_leaders"), "minimal separable leaders differ");
    if (var == Variant::Thm1) require(leaders_within(rep, r), "a minimal separable leader exceeds r");
    if (var == Variant::Thm3) require(leaders_thm3(rep, r, sys.m()), "leader condition fails");
    if (var == Variant::Thm2) require(leaders_below(rep, mu), "a minimal separable leader is not below mu");
    DerivationTable table(t);
    require(commutator_check(table, H).empty(), "derivations do not commute on the witness");
    // The witness is the deterministic saturation at this height.
    auto stored = replay_bindings(sys, bs);
    auto po = run_pass(sys.space, sys.characteristic, stored, H, {});
    require(po.kind == LayerOutcome::Done, "recomputed saturation does not complete");
    auto it = po.tower.slots().begin();
    require(po.tower.slots().size() == rels.size(), "witness has a different number of relations");
    for (auto& [v, rel] : rels) {
        require(it->first == v && it->second.relation == rel, "witness relation differs from the recomputed one");
        ++it;
    }
    return {true, "witness verified at height " + std::to_string(H)};
}

}  // namespace detail

inline ReplayResult replay_certificate(const json& c) {
    try {
        detail::require(c.is_object(), "certificate must be an object");
        SystemSpec sys = system_from_json(c.at("system"));
        detail::require(c.at("kind").is_string(), "invalid kind");
        std::string kind = c.at("kind").get<std::string>();
        detail::require(c.at("variant").is_string(), "invalid variant");
        variant_from_string(c.at("variant").get<std::string>());
        if (kind == "insoluble") return detail::replay_insoluble(c, sys);
        if (kind == "soluble") return detail::replay_soluble(c, sys);
        return {false, "unknown certificate kind '" + kind + "'"};
    } catch (const std::exception& e) {
        return {false, e.what()};
    }
}

// ---------------------------------------------------------------------------
// Narrative

struct Explanation {
    std::vector<std::string> lines;
    std::string text() const {
        std::string s;
        for (auto& l : lines) s += l + "\n";
        return s;
    }
};

inline VarNamer symbol_namer(const SystemSpec& sys) {
    Space sp = sys.space;
    auto names = sys.unknowns;
    return [sp, names](Var v) { return slot_symbol(sp.unrank(v), names); };
}

namespace detail {

inline std::string route_label(const TraceStep& s, const SystemSpec& sys, Var slot) {
    if (s.source && s.derivation >= 0)
        return "∂" + std::to_string(s.derivation) + slot_symbol(sys.space.unrank(*s.source), sys.unknowns);
    return slot_symbol(sys.space.unrank(slot), sys.unknowns);
}

inline std::string leader_list(const std::vector<DerivIndex>& ls, const SystemSpec& sys) {
    std::string s = "{";
    for (std::size_t i = 0; i < ls.size(); ++i)
        s += (i ? "," : "") + ls[i].index.to_string() + (sys.n() > 1 ? sys.unknowns[ls[i].unknown] : "");
    return s + "}";
}

/// "route A gives s = u but route B gives s = w" for the final clash.
inline std::optional<std::string> clash_routes(const Violation& x, const SystemSpec& sys) {
    const TraceStep& last = x.steps.back();
    const Space& sp = sys.space;
    std::optional<Var> s;
    for (Var v : last.equation.vars())
        if (sp.height_of(v) == x.layer && (!s || v > *s)) s = v;
    if (!s || last.equation.degree(*s) != 1) return std::nullopt;
    auto def = x.defined_by.find(*s);
    if (def == x.defined_by.end()) return std::nullopt;
    const Tower& t = x.tower;
    Elem mine = t.neg(t.div(t.nf(last.equation.coeff(*s, 0)), t.nf(last.equation.coeff(*s, 1))));
    Elem theirs = t.var(*s);
    auto nm = symbol_namer(sys);
    return route_label(last, sys, *s) + " = " + mine.to_string(nm) + " but " + route_label(x.steps[def->second], sys, *s) + " = " +
           theirs.to_string(nm);
}

}  // namespace detail

inline Explanation explain(const Verdict& v) {
    Explanation ex;
    const SystemSpec& sys = v.system;
    auto nm = symbol_namer(sys);
    ex.lines.push_back(std::string("verdict: ") + to_string(v.kind));
    for (auto& r : v.rounds)
        ex.lines.push_back("round " + std::to_string(r.index) + ": r = " + std::to_string(r.r) + ", saturated to height " +
                           std::to_string(r.height) + (r.ok ? "" : " (contradiction)") + ", minimal separable leaders " +
                           detail::leader_list(r.minimal, sys));
    for (auto& b : v.sat.bindings)
        ex.lines.push_back("binding (pass " + std::to_string(b.round) + ", layer " + std::to_string(b.layer) + "): " +
                           b.relation.to_string(nm) + " = 0");
    if (v.kind == Verdict::Insoluble && v.sat.violation) {
        const Violation& x = *v.sat.violation;
        std::set<Var> shown;
        for (auto& s : x.steps)
            if (s.source && shown.insert(*s.source).second && x.tower.kind(*s.source) == SlotKind::Solved)
                ex.lines.push_back("value: " + nm(*s.source) + " = " + x.tower.var(*s.source).to_string(nm));
        const TraceStep& last = x.steps.back();
        std::string how = last.derivation >= 0 ? "D" + std::to_string(last.derivation) + " of " + last.relation.to_string(nm) + " = 0"
                                               : last.relation.to_string(nm) + " = 0";
        ex.lines.push_back("clash at layer " + std::to_string(x.layer) + ": " + how + " reduces to " + x.residue.to_string() + " = 0");
        if (auto routes = detail::clash_routes(x, sys)) ex.lines.push_back("so " + *routes);
    } else if (v.kind == Verdict::Soluble) {
        ex.lines.push_back("minimal separable leaders " + detail::leader_list(v.leaders.all_minimal(), sys));
        for (auto& [slot, c] : v.leaders.classes)
            if (c == LeaderClass::Inseparable) ex.lines.push_back("inseparable leader " + nm(slot));
        if (v.mu) ex.lines.push_back("witness: height " + std::to_string(v.sat.height) + ", mu = " + v.mu->to_string());
        else ex.lines.push_back("witness: height " + std::to_string(v.sat.height) + " = 2r with r = " + std::to_string(v.r));
    } else {
        ex.lines.push_back("undecided: " + v.reason);
        if (!v.rounds.empty()) ex.lines.push_back("last r = " + std::to_string(v.rounds.back().r));
        if (v.growth) ex.lines.push_back("growth forced by leader " + slot_symbol(*v.growth, sys.unknowns) + " " + v.growth->index.to_string());
    }
    for (auto& n : v.notes) ex.lines.push_back("note: " + n);
    for (auto& w : v.sat.warnings) ex.lines.push_back("warning: " + w);
    return ex;
}

}  // namespace prolong
