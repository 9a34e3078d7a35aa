#include "iotsem/meta.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace iotsem {

namespace {

std::optional<uint64_t> sat_add(std::optional<uint64_t> a, std::optional<uint64_t> b) {
    if (!a || !b) return std::nullopt;
    return *a + *b;
}

}  // namespace

std::optional<uint64_t> pfx_bound(Pid p) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil: return 0;
        case PKind::Var: return std::nullopt;  // infinity; finite for time-guarded terms
        case PKind::Prefix:
            if (t.pk == PrefixKind::Sleep) return 0;
            return sat_add(1, pfx_bound(t.cont));
        case PKind::Timeout: return sat_add(1, pfx_bound(t.then_));
        case PKind::Par: {
            std::optional<uint64_t> sum = 0;
            for (Pid q : t.parts) sum = sat_add(sum, pfx_bound(q));
            return sum;
        }
        case PKind::Cond: {
            auto a = pfx_bound(t.then_);
            auto b = pfx_bound(t.else_);
            if (!a || !b) return std::nullopt;
            return std::max(*a, *b);
        }
        case PKind::Fix: return pfx_bound(t.body);
    }
    return 0;
}

uint64_t rd_bound(const CanonNet& net) {
    uint64_t sum = 0;
    for (const NetNode& n : net.nodes) {
        auto b = pfx_bound(n.proc);
        if (!b) throw ModelError(ModelError::NotTimeGuarded, "unbounded process in node " + sym_text(n.name));
        sum += *b;
    }
    return sum;
}

uint64_t rd_bound(const Network& net, const ModelUniverse& u) { return rd_bound(canonicalize(net, u)); }

namespace {

// Longest path over the instantaneous sub-graph; the graph is a DAG for
// well-timed networks, a cycle is reported as a violation.
struct ChainDp {
    std::vector<int8_t> mark;  // 0 unseen, 1 on stack, 2 done
    std::vector<uint64_t> len;
    const std::vector<std::vector<uint32_t>>& succ;
    bool cycle = false;

    explicit ChainDp(const std::vector<std::vector<uint32_t>>& s) : mark(s.size(), 0), len(s.size(), 0), succ(s) {}

    uint64_t run(uint32_t v) {
        if (mark[v] == 2) return len[v];
        if (mark[v] == 1) {
            cycle = true;
            return 0;
        }
        mark[v] = 1;
        uint64_t best = 0;
        for (uint32_t w : succ[v]) best = std::max(best, 1 + run(w));
        mark[v] = 2;
        len[v] = best;
        return best;
    }
};

}  // namespace

std::vector<PropertyReport> check_time_properties(const CanonNet& net, const ModelUniverse& u, size_t budget,
                                                  const EngineOptions& opts) {
    PropertyReport maxprog{"maximal-progress", 0, {}};
    PropertyReport patience{"patience", 0, {}};
    PropertyReport timedet{"local-time-determinism", 0, {}};
    PropertyReport welltime{"well-timedness-bound", 0, {}};

    StateStore store;
    store.intern(net);
    std::vector<std::vector<uint32_t>> insta_succ;

    for (size_t at = 0; at < store.size(); ++at) {
        CanonNet state = store.state(at);
        auto succs = reductions(state, u, opts);
        insta_succ.resize(store.size());

        bool has_insta = false, has_time = false;
        std::vector<uint32_t> timed;
        for (auto& [label, succ] : succs) {
            bool fresh = false;
            uint32_t id = store.intern(succ, &fresh);
            if (fresh && store.size() > budget) throw BudgetExceeded(store.size(), 0);
            if (label.instantaneous()) {
                has_insta = true;
                insta_succ[at].push_back(id);
            } else {
                has_time = true;
                timed.push_back(id);
            }
        }

        if (has_insta && has_time)
            maxprog.counterexamples.push_back(
                {state.hash_hex(), "state offers both an instantaneous reduction and a time step"});
        if (!has_insta && !has_time)
            patience.counterexamples.push_back({state.hash_hex(), "state offers no reduction at all"});

        // Prop 2.1 shape on every pair of timed successors.
        for (size_t i = 0; i + 1 < timed.size() && timedet.counterexamples.size() < 16; ++i) {
            for (size_t j = i + 1; j < timed.size(); ++j) {
                const CanonNet& a = store.state(timed[i]);
                const CanonNet& b = store.state(timed[j]);
                if (a.nodes.size() != b.nodes.size()) {
                    timedet.counterexamples.push_back({state.hash_hex(), "timed successors differ in node count"});
                    continue;
                }
                for (size_t k = 0; k < a.nodes.size(); ++k) {
                    // nodes aligned by unique name (canonical order sorts by name)
                    const NetNode& na = a.nodes[k];
                    const NetNode& nb = b.nodes[k];
                    if (na.name != nb.name || na.proc != nb.proc || !(na.iface == nb.iface) ||
                        na.mobile != nb.mobile) {
                        timedet.counterexamples.push_back(
                            {state.hash_hex(), "timed successors differ beyond location in node " + sym_text(na.name)});
                    } else if (u.distance(na.loc, nb.loc) > 2 * static_cast<int64_t>(u.delta)) {
                        timedet.counterexamples.push_back(
                            {state.hash_hex(), "node " + sym_text(na.name) + " drifted more than 2*delta"});
                    }
                }
            }
        }
    }

    maxprog.states_checked = patience.states_checked = timedet.states_checked = welltime.states_checked = store.size();

    insta_succ.resize(store.size());
    ChainDp dp(insta_succ);
    for (uint32_t v = 0; v < store.size(); ++v) {
        uint64_t chain = dp.run(v);
        if (dp.cycle) {
            welltime.counterexamples.push_back({store.state(v).hash_hex(), "instantaneous cycle"});
            break;
        }
        uint64_t bound = rd_bound(store.state(v));
        if (chain > bound)
            welltime.counterexamples.push_back(
                {store.state(v).hash_hex(),
                 "chain of " + std::to_string(chain) + " instantaneous steps exceeds rd bound " + std::to_string(bound)});
    }

    return {maxprog, patience, timedet, welltime};
}

namespace {

struct SuccKey {
    uint8_t kind;
    Sym actuator;
    uint32_t dst;
    bool operator==(const SuccKey& o) const { return kind == o.kind && actuator == o.actuator && dst == o.dst; }
    bool operator<(const SuccKey& o) const {
        if (kind != o.kind) return kind < o.kind;
        if (actuator != o.actuator) return sym_cmp(actuator, o.actuator) < 0;
        return dst < o.dst;
    }
    std::string to_string() const {
        std::string l = kind == 0 ? "tau" : (kind == 1 ? "act(" + sym_text(actuator) + ")" : "sigma");
        return l + "->" + std::to_string(dst);
    }
};

}  // namespace

PropertyReport check_harmony(const CanonNet& net, const ModelUniverse& u, size_t budget, const EngineOptions& opts) {
    PropertyReport report{"harmony", 0, {}};
    StateStore store;
    store.intern(net);

    for (size_t at = 0; at < store.size(); ++at) {
        CanonNet state = store.state(at);

        std::vector<SuccKey> red_set, lts_set;
        for (auto& [label, succ] : reductions(state, u, opts)) {
            bool fresh = false;
            uint32_t id = store.intern(succ, &fresh);
            if (fresh && store.size() > budget) throw BudgetExceeded(store.size(), 0);
            red_set.push_back({static_cast<uint8_t>(label.kind), label.actuator, id});
        }
        for (auto& [label, succ] : network_transitions(state, u, opts)) {
            uint8_t kind;
            if (label.kind == Label::Tau)
                kind = 0;
            else if (label.kind == Label::Act)
                kind = 1;
            else if (label.kind == Label::Sigma)
                kind = 2;
            else
                continue;  // send/receive have no reduction counterpart
            bool fresh = false;
            uint32_t id = store.intern(succ, &fresh);
            if (fresh && store.size() > budget) throw BudgetExceeded(store.size(), 0);
            lts_set.push_back({kind, label.name, id});
        }

        std::sort(red_set.begin(), red_set.end());
        red_set.erase(std::unique(red_set.begin(), red_set.end()), red_set.end());
        std::sort(lts_set.begin(), lts_set.end());
        lts_set.erase(std::unique(lts_set.begin(), lts_set.end()), lts_set.end());

        if (red_set != lts_set && report.counterexamples.size() < 16) {
            std::string detail = "reduction steps {";
            for (auto& k : red_set) detail += k.to_string() + " ";
            detail += "} vs transitions {";
            for (auto& k : lts_set) detail += k.to_string() + " ";
            detail += "}";
            report.counterexamples.push_back({state.hash_hex(), detail});
        }
    }
    report.states_checked = store.size();
    return report;
}

uint64_t longest_instantaneous_chain(const CanonNet& net, const ModelUniverse& u, size_t budget) {
    StateStore store;
    store.intern(net);
    std::vector<std::vector<uint32_t>> succ;
    for (size_t at = 0; at < store.size(); ++at) {
        succ.resize(store.size());
        for (auto& [label, s] : reductions(store.state(at), u)) {
            if (!label.instantaneous()) continue;
            bool fresh = false;
            uint32_t id = store.intern(s, &fresh);
            if (fresh && store.size() > budget) throw BudgetExceeded(store.size(), 0);
            succ[at].push_back(id);
        }
    }
    succ.resize(store.size());
    ChainDp dp(succ);
    uint64_t best = dp.run(0);
    if (dp.cycle) throw ModelError(ModelError::NotTimeGuarded, "instantaneous cycle found");
    return best;
}

std::string report_to_string(const PropertyReport& r) {
    std::string out = r.property + ": " + (r.passed() ? "pass" : "FAIL") + " (" + std::to_string(r.states_checked) +
                      " states";
    if (!r.passed()) out += ", " + std::to_string(r.counterexamples.size()) + " counterexamples";
    out += ")";
    for (auto& c : r.counterexamples) out += "\n  at " + c.state + ": " + c.explanation;
    return out;
}

}  // namespace iotsem
