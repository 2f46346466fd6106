#pragma once

// JSON reports for the command-line tool.

#include "forms.hpp"
#include "render.hpp"
#include "verdict.hpp"

namespace prolong {

inline constexpr int kReportVersion = 1;

namespace detail {

inline json picture_to_json(const Picture& p) {
    json rows = json::array();
    for (auto& row : p) {
        std::string s;
        for (std::size_t c = 0; c < row.size(); ++c) s += (c ? " " : "") + row[c];
        rows.push_back(s);
    }
    return rows;
}

inline json renders_to_json(const Tower& t, const SystemSpec& sys, unsigned h) {
    json out = json::object();
    if (sys.m() != 2) return out;
    for (unsigned k = 0; k < sys.n(); ++k) out[sys.unknowns[k]] = picture_to_json(render_triangle(t, k, h));
    return out;
}

inline json leader_report_json(const LeaderReport& lr, const SystemSpec& sys) {
    auto nm = sys.namer();
    json classes = json::array();
    for (auto& [slot, c] : lr.classes) {
        DerivIndex d = sys.space.unrank(slot);
        classes.push_back({{"slot", nm(slot)}, {"index", d.index.entries()}, {"unknown", sys.unknowns[d.unknown]}, {"class", to_string(c)}});
    }
    json minimal = json::array();
    for (auto& d : lr.all_minimal()) minimal.push_back({{"index", d.index.entries()}, {"unknown", sys.unknowns[d.unknown]}});
    return {{"classes", classes}, {"minimal", minimal}};
}

inline json log_json(const Saturation& s, const SystemSpec& sys) {
    auto nm = sys.namer();
    json log = json::array();
    for (auto& e : s.log) {
        json j = {{"round", e.round}, {"height", e.height}, {"event", e.event}, {"layer", e.layer}};
        if (e.binding) j["relation"] = e.binding->to_string(nm);
        log.push_back(j);
    }
    return log;
}

}  // namespace detail

inline json saturation_report(const SystemSpec& sys, const Saturation& s) {
    auto nm = sys.namer();
    json bindings = json::array();
    for (auto& b : s.bindings)
        bindings.push_back({{"relation", b.relation.to_string(nm)}, {"round", b.round}, {"layer", b.layer}, {"height", b.height}});
    json slots = json::array();
    for (auto& [v, sl] : s.tower.slots())
        slots.push_back({{"slot", nm(v)},
                         {"kind", to_string(sl.kind)},
                         {"value", sl.kind == SlotKind::Solved ? sl.value.to_string(nm) : sl.relation.to_string(nm)}});
    json r = {{"version", kReportVersion},
              {"command", "saturate"},
              {"ok", s.ok},
              {"height", s.height},
              {"bindings", bindings},
              {"log", detail::log_json(s, sys)},
              {"slots", slots},
              {"leaders", detail::leader_report_json(classify_leaders(s.tower), sys)},
              {"renders", s.ok ? detail::renders_to_json(s.tower, sys, s.height) : json::object()},
              {"warnings", s.warnings}};
    if (s.violation) r["residue"] = s.violation->residue.to_string();
    return r;
}

inline json verdict_report(const Verdict& v) {
    const SystemSpec& sys = v.system;
    auto nm = sys.namer();
    json rounds = json::array();
    for (auto& r : v.rounds) {
        json minimal = json::array();
        for (auto& d : r.minimal) minimal.push_back({{"index", d.index.entries()}, {"unknown", sys.unknowns[d.unknown]}});
        rounds.push_back({{"index", r.index}, {"r", r.r}, {"height", r.height}, {"ok", r.ok}, {"minimal", minimal}, {"bindings", r.bindings}});
    }
    json bindings = json::array();
    for (auto& b : v.sat.bindings)
        bindings.push_back({{"relation", b.relation.to_string(nm)}, {"round", b.round}, {"layer", b.layer}, {"height", b.height}});
    json rep = {{"version", kReportVersion},
                {"command", "check"},
                {"verdict", to_string(v.kind)},
                {"variant", to_string(v.variant)},
                {"system", serialize_system(sys)},
                {"rounds", rounds},
                {"leaders", detail::leader_report_json(v.leaders, sys)},
                {"bindings", bindings},
                {"log", detail::log_json(v.sat, sys)},
                {"certificate", certificate(v)},
                {"explanation", explain(v).lines},
                {"renders", json::object()}};
    if (v.kind == Verdict::Soluble) {
        if (v.mu) rep["mu"] = v.mu->entries();
        else rep["r"] = v.r;
        json w = json::array();
        for (auto& [slot, s] : v.sat.tower.slots())
            w.push_back({{"slot", nm(slot)}, {"kind", to_string(s.kind)}, {"relation", s.relation.to_string(nm)}});
        rep["witness"] = {{"height", v.sat.height}, {"slots", w}};
        rep["renders"] = detail::renders_to_json(v.sat.tower, sys, v.sat.height);
    } else if (v.kind == Verdict::Insoluble) {
        const Violation& x = *v.sat.violation;
        json steps = json::array();
        for (auto& s : x.steps) {
            json j = {{"relation", s.relation.to_string(nm)}, {"derivation", s.derivation}, {"equation", s.equation.to_string(nm)},
                      {"reduced", s.reduced.to_string(nm)}};
            if (s.source) j["source"] = nm(*s.source);
            steps.push_back(j);
        }
        rep["trace"] = {{"round", x.round}, {"layer", x.layer}, {"steps", steps}, {"residue", x.residue.to_string()}};
    } else {
        rep["reason"] = v.reason;
    }
    return rep;
}

inline json commutation_report(const SystemSpec& sys) {
    FirstOrderSystem fo = first_order_reduction(sys);
    CommutationSystem cs = commutation_system(fo);
    auto nm = symbol_namer(sys);
    TowerOps ops{&fo.tower};
    auto sol = linsolve(cs.lin, ops);
    json vars = json::array(), unknowns = json::array(), solution = json::array();
    for (Var v : fo.variables) vars.push_back(nm(v));
    for (auto& l : cs.lin.unknowns) unknowns.push_back(label_name(l, sys));
    json rep = {{"version", kReportVersion},
                {"command", "forms commutation"},
                {"variables", vars},
                {"assigned", fo.assigned.size()},
                {"unknowns", unknowns},
                {"rows", describe(cs, sys)},
                {"consistent", !sol.inconsistent}};
    if (!sol.inconsistent) {
        for (std::size_t j = 0; j < sol.particular.size(); ++j)
            solution.push_back({{"unknown", label_name(cs.lin.unknowns[j], sys)}, {"value", sol.particular[j].to_string(nm)}});
        rep["solution"] = solution;
        rep["kernel_dimension"] = sol.kernel.size();
    }
    return rep;
}

}  // namespace prolong
