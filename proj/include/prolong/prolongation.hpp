#pragma once

// Generic saturation: adjoin derivative layers one height at a time, reduce
// every differentiated relation against the lower layers, and triangularize
// what remains. Relations among lower slots ("bindings") are stored and the
// pass restarts from scratch; a nonzero constant is a contradiction.

#include "system.hpp"

#include <deque>
#include <optional>
#include <string>
#include <vector>

namespace prolong {

/// One equation handled while building a layer.
struct TraceStep {
    std::optional<Var> source;  // leader slot of the differentiated relation; empty for stored relations
    Poly relation;
    int derivation = -1;        // -1: the stored relation itself
    Poly equation;              // D_i relation, or the relation itself
    Poly reduced;               // numerator of the normal form against the tower at that moment
};

struct Binding {
    Poly relation;
    unsigned round = 0;
    unsigned layer = 0;
    unsigned height = 0;  // target height of the pass that found it
};

struct Violation {
    unsigned round = 0;
    unsigned layer = 0;
    std::vector<TraceStep> steps;  // the whole clash layer, in processing order
    Scalar residue;
    std::map<Var, std::size_t> defined_by;  // layer slot -> step that defined it
    Tower tower;                            // state at the moment of the clash
};

struct LogEntry {
    unsigned round = 0;
    unsigned height = 0;  // target height of the pass
    std::string event;    // "binding", "violation", "complete"
    unsigned layer = 0;
    std::optional<Poly> binding;
};

struct SaturateOptions {
    unsigned max_restarts = 64;
    std::size_t max_layer_steps = 200000;
    std::size_t max_terms = 4000;  // size guard on reduced equations
};

struct SaturationLimit : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Saturation {
    bool ok = false;
    unsigned height = 0;
    Tower tower;
    std::vector<Poly> stored;       // inputs followed by bindings
    std::vector<Binding> bindings;
    std::optional<Violation> violation;
    std::vector<LogEntry> log;
    std::vector<std::string> warnings;
};

namespace detail {

struct PendingEq {
    std::optional<Var> source;
    Poly relation;
    int derivation;
    Poly equation;
};

struct LayerOutcome {
    enum Kind { Done, Bound, Clash } kind = Done;
    Poly binding;
    Scalar residue;
    std::vector<TraceStep> steps;
    std::map<Var, std::size_t> defined_by;
};

inline Poly normalize_binding(const Poly& r) {
    Var v = *r.max_var();
    Poly pp = detail::primitive_part(r, v);
    return pp.scaled(pp.lc(v).leading_coefficient().inverse());
}

/// Triangularizes one layer. Layer slots are the ranks in [lo, hi).
inline LayerOutcome process_layer(Tower& t, Var lo, Var hi, std::deque<PendingEq> queue, const SaturateOptions& opt) {
    LayerOutcome out;
    std::map<Var, Poly> defs;
    std::map<Var, std::size_t> origin;
    auto rebuild_from = [&](Var y) {
        t.truncate_from(y);
        for (auto it = defs.lower_bound(y); it != defs.end();) {
            auto res = t.install(it->first, it->second);
            if (res.installed) {
                ++it;
                continue;
            }
            queue.push_back({std::nullopt, it->second, -1, res.reduced});
            origin.erase(it->first);
            it = defs.erase(it);
        }
    };
    std::size_t guard = 0;
    while (!queue.empty()) {
        if (++guard > opt.max_layer_steps) throw SaturationLimit("layer triangularization did not settle");
        PendingEq e = std::move(queue.front());
        queue.pop_front();
        Poly r = t.nf(e.equation).num();
        if (r.terms().size() > opt.max_terms)
            throw SaturationLimit("expression size guard: reduced equation has " + std::to_string(r.terms().size()) + " terms");
        out.steps.push_back({e.source, e.relation, e.derivation, e.equation, r});
        if (r.is_zero()) continue;
        std::optional<Var> y;
        for (Var v : r.vars())
            if (v >= lo && v < hi) y = y ? std::max(*y, v) : v;
        if (!y) {
            if (r.is_constant()) {
                out.kind = LayerOutcome::Clash;
                out.residue = r.constant_value();
            } else {
                out.kind = LayerOutcome::Bound;
                out.binding = normalize_binding(r);
            }
            out.defined_by = origin;
            return out;
        }
        auto it = defs.find(*y);
        if (it != defs.end()) {
            // y is algebraic and r has smaller degree in it: r replaces the definition
            queue.push_back({std::nullopt, it->second, -1, it->second});
            it->second = r;
        } else {
            defs.emplace(*y, r);
        }
        origin[*y] = out.steps.size() - 1;
        rebuild_from(*y);
    }
    out.defined_by = origin;
    return out;
}

struct PassOutcome {
    LayerOutcome::Kind kind = LayerOutcome::Done;
    unsigned layer = 0;
    LayerOutcome detail;
    Tower tower;
};

/// Equations of layer h: derivatives of the leader relations one height
/// below, then the stored relations whose top height is h.
inline std::deque<PendingEq> layer_equations(const Tower& t, unsigned h, const std::vector<Poly>& stored) {
    const Space& sp = t.space();
    std::deque<PendingEq> q;
    if (h > 0) {
        Var lo = sp.slots_upto(h - 1) - sp.n() * sp.count_at(h - 1), hi = sp.slots_upto(h - 1);
        for (auto it = t.slots().lower_bound(lo); it != t.slots().end() && it->first < hi; ++it)
            for (unsigned i = 0; i < sp.m(); ++i)
                q.push_back({it->first, it->second.relation, static_cast<int>(i), differentiate(it->second.relation, i, sp)});
    }
    for (auto& s : stored)
        if (poly_height(s, sp) == h) q.push_back({std::nullopt, s, -1, s});
    return q;
}

inline PassOutcome run_pass(const Space& sp, std::uint32_t p, const std::vector<Poly>& stored, unsigned H, const SaturateOptions& opt) {
    PassOutcome po;
    po.tower = Tower(sp, p);
    for (unsigned h = 0; h <= H; ++h) {
        Var lo = h == 0 ? 0 : sp.slots_upto(h - 1), hi = sp.slots_upto(h);
        auto res = process_layer(po.tower, lo, hi, layer_equations(po.tower, h, stored), opt);
        if (res.kind != LayerOutcome::Done) {
            po.kind = res.kind;
            po.layer = h;
            po.detail = std::move(res);
            return po;
        }
    }
    return po;
}

}  // namespace detail

/// Saturates to height H starting from the given stored relations.
inline Saturation saturate_relations(const Space& sp, std::uint32_t p, std::vector<Poly> stored, unsigned H,
                                     const SaturateOptions& opt = {}, std::vector<Binding> prior = {}) {
    if (H > kMaxHeight) throw std::out_of_range("target height exceeds the supported maximum");
    Saturation s;
    s.height = H;
    s.bindings = std::move(prior);
    unsigned round = 0;
    for (auto& b : s.bindings) round = std::max(round, b.round + 1);
    for (unsigned restarts = 0;; ++restarts, ++round) {
        if (restarts > opt.max_restarts) throw SaturationLimit("restart limit reached while saturating");
        auto po = detail::run_pass(sp, p, stored, H, opt);
        if (po.kind == detail::LayerOutcome::Bound) {
            stored.push_back(po.detail.binding);
            s.bindings.push_back({po.detail.binding, round, po.layer, H});
            s.log.push_back({round, H, "binding", po.layer, po.detail.binding});
            continue;
        }
        s.tower = std::move(po.tower);
        s.stored = std::move(stored);
        s.warnings = s.tower.warnings();
        if (po.kind == detail::LayerOutcome::Clash) {
            Violation v;
            v.round = round;
            v.layer = po.layer;
            v.steps = std::move(po.detail.steps);
            v.residue = po.detail.residue;
            v.defined_by = std::move(po.detail.defined_by);
            v.tower = s.tower;
            s.violation = std::move(v);
            s.log.push_back({round, H, "violation", po.layer, std::nullopt});
            return s;
        }
        s.ok = true;
        s.log.push_back({round, H, "complete", H, std::nullopt});
        return s;
    }
}

inline std::vector<Poly> input_relations(const SystemSpec& sys) {
    std::vector<Poly> r;
    for (auto& e : sys.equations) r.push_back(e.poly);
    return r;
}

inline Saturation saturate(const SystemSpec& sys, unsigned H, const SaturateOptions& opt = {}) {
    return saturate_relations(sys.space, sys.characteristic, input_relations(sys), H, opt);
}

/// Ok iff saturation to H meets no contradiction.
inline bool differential_condition(const SystemSpec& sys, unsigned H, const SaturateOptions& opt = {}) {
    return saturate(sys, H, opt).ok;
}

/// D_i a = a shifted by iota_i, as normal forms in a tower, extended to
/// elements by the chain rule. Single entries may be overridden.
class DerivationTable {
public:
    explicit DerivationTable(const Tower& t) : t_(&t) {}

    const Tower& tower() const { return *t_; }

    Elem value(unsigned i, Var v) const {
        auto it = overrides_.find({i, v});
        if (it != overrides_.end()) return it->second;
        const Space& sp = t_->space();
        DerivIndex d = sp.unrank(v);
        d.index = add_unit(d.index, i);
        return t_->var(sp.rank(d));
    }

    void override_value(unsigned i, Var v, Elem e) { overrides_[{i, v}] = std::move(e); }

    Elem derive_poly(unsigned i, const Poly& p) const {
        Elem acc = t_->zero();
        for (Var v : p.vars()) {
            Poly dv = p.derivative(v);
            if (dv.is_zero()) continue;
            acc = t_->add(acc, t_->mul(t_->nf(dv), value(i, v)));
        }
        return acc;
    }

    Elem derive(unsigned i, const Elem& e) const {
        if (e.is_zero()) return e;
        Elem dn = derive_poly(i, e.num());
        if (e.den().is_constant()) return t_->div(dn, Elem(e.den()));
        Elem dd = derive_poly(i, e.den());
        Elem num = t_->sub(t_->mul(dn, Elem(e.den())), t_->mul(Elem(e.num()), dd));
        return t_->div(num, Elem(e.den() * e.den()));
    }

private:
    const Tower* t_;
    std::map<std::pair<unsigned, Var>, Elem> overrides_;
};

struct CommutatorFailure {
    unsigned i = 0, j = 0;
    DerivIndex slot;
    Elem difference;
};

/// All (i < j, slot) with |slot| + 2 <= H where D_j D_i slot != D_i D_j slot.
inline std::vector<CommutatorFailure> commutator_check(const DerivationTable& table, unsigned H) {
    std::vector<CommutatorFailure> out;
    const Tower& t = table.tower();
    const Space& sp = t.space();
    if (H < 2) return out;
    std::uint64_t total = sp.slots_upto(H - 2);
    for (Var v = 0; v < total; ++v)
        for (unsigned i = 0; i < sp.m(); ++i)
            for (unsigned j = i + 1; j < sp.m(); ++j) {
                Elem a = table.derive(j, table.value(i, v));
                Elem b = table.derive(i, table.value(j, v));
                Elem diff = t.sub(a, b);
                if (!diff.is_zero()) out.push_back({i, j, sp.unrank(v), diff});
            }
    return out;
}

/// Every leader slot lies in the tower; leader report per unknown.
inline bool leaders_within(const LeaderReport& rep, unsigned r) { return rep.max_minimal_height() <= r; }

inline bool leaders_below(const LeaderReport& rep, const MultiIndex& mu) {
    for (auto& d : rep.all_minimal())
        if (!below(d.index, mu)) return false;
    return true;
}

/// Per unknown: all minimal leaders have height <= r, or their join has height <= 2r.
inline bool leaders_thm3(const LeaderReport& rep, unsigned r, unsigned m) {
    for (auto& ls : rep.minimal) {
        bool first = true;
        for (auto& d : ls) first = first && height(d.index) <= r;
        if (first) continue;
        MultiIndex j(m);
        for (auto& d : ls) j = join(j, d.index);
        if (height(j) > 2 * r) return false;
    }
    return true;
}

inline bool hypothesis_thm1(const SystemSpec& sys, unsigned r) {
    if (r == 0) return false;
    auto s = saturate(sys, 2 * r);
    return s.ok && leaders_within(classify_leaders(s.tower), r);
}

inline bool hypothesis_thm2(const SystemSpec& sys, const MultiIndex& mu) {
    if (mu.size() != sys.m()) throw std::invalid_argument("multi-index length does not match the number of derivations");
    auto s = saturate(sys, height(mu));
    return s.ok && leaders_below(classify_leaders(s.tower), mu);
}

inline bool hypothesis_thm3(const SystemSpec& sys, unsigned r) {
    if (r == 0) return false;
    auto s = saturate(sys, 2 * r);
    return s.ok && leaders_thm3(classify_leaders(s.tower), r, sys.m());
}

}  // namespace prolong
