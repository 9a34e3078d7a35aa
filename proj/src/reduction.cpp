#include "iotsem/reduction.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace iotsem {

std::string ReductionLabel::to_string() const {
    switch (kind) {
        case Tau: return "tau";
        case Act: return "act(" + sym_text(actuator) + ")";
        case TimeStep: return "sigma";
    }
    return "?";
}

bool Barb::operator<(const Barb& o) const {
    int c = sym_cmp(actuator, o.actuator);
    if (c) return c < 0;
    if (loc != o.loc) return loc < o.loc;
    return value_cmp(value, o.value) < 0;
}

std::string barb_to_string(const Barb& b, const ModelUniverse& u) {
    return sym_text(b.actuator) + "@" + u.loc_name(b.loc) + "!" + value_to_string(b.value, u);
}

std::vector<Pid> top_components(Pid p) {
    const ProcTerm& t = term(p);
    if (t.kind == PKind::Nil) return {};
    if (t.kind == PKind::Par) return t.parts;
    return {p};
}

namespace {

void expand_into(Pid p, std::vector<Pid>& out, int depth) {
    if (depth > 64)
        throw ModelError(ModelError::NotTimeGuarded, "runaway recursion while expanding a component");
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil: return;
        case PKind::Par:
            for (Pid q : t.parts) expand_into(q, out, depth);
            return;
        case PKind::Fix: expand_into(canon_term(unfold_fix(p)), out, depth + 1); return;
        case PKind::Cond:
            // closed guards were resolved by canonicalization; an open guard
            // here means the network was not closed
            throw ModelError(ModelError::IllFormed, "open guard at executable position");
        case PKind::Var: throw ModelError(ModelError::IllFormed, "free process variable at executable position");
        case PKind::Prefix:
        case PKind::Timeout: out.push_back(p); return;
    }
}

std::mutex g_expand_mtx;
std::unordered_map<Pid, std::vector<Pid>> g_expand_cache;

}  // namespace

const std::vector<Pid>& expand_component(Pid p) {
    std::lock_guard<std::mutex> lock(g_expand_mtx);
    auto it = g_expand_cache.find(p);
    if (it != g_expand_cache.end()) return it->second;
    std::vector<Pid> basics;
    expand_into(p, basics, 0);
    return g_expand_cache.emplace(p, std::move(basics)).first->second;
}

namespace {

// Redex bookkeeping: a basic executable part within the expansion of one
// top-level component of one node.
struct BasicRef {
    size_t node;
    size_t comp;   // index into top_components of the node's process
    size_t basic;  // index into expand_component of that component
    Pid pid;
};

struct NodeScan {
    std::vector<Pid> comps;
    std::vector<const std::vector<Pid>*> expansions;
};

// Rebuilds a node process after replacing selected basics inside touched
// components; untouched components stay folded.
Pid rebuild_process(const NodeScan& scan, const std::vector<std::pair<size_t, std::pair<size_t, Pid>>>& repl) {
    std::vector<Pid> parts;
    for (size_t ci = 0; ci < scan.comps.size(); ++ci) {
        bool touched = false;
        for (auto& r : repl)
            if (r.first == ci) touched = true;
        if (!touched) {
            parts.push_back(scan.comps[ci]);
            continue;
        }
        std::vector<Pid> basics = *scan.expansions[ci];
        for (auto& r : repl)
            if (r.first == ci) basics[r.second.first] = r.second.second;
        parts.push_back(p_par(std::move(basics)));
    }
    return p_par(std::move(parts));
}

Value loc_value(LocId l) { return Value::location(l); }

}  // namespace

std::vector<Reduct> reductions(const CanonNet& net, const ModelUniverse& u, const EngineOptions& opts) {
    std::vector<Reduct> out;
    StateStore dedupe;
    std::vector<std::pair<ReductionLabel, uint32_t>> seen;

    auto emit = [&](ReductionLabel label, CanonNet succ) {
        uint32_t id = dedupe.intern(std::move(succ));
        for (auto& [l, s] : seen)
            if (l == label && s == id) return;
        seen.emplace_back(label, id);
        out.emplace_back(label, dedupe.state(id));
    };

    std::vector<NodeScan> scans(net.nodes.size());
    for (size_t ni = 0; ni < net.nodes.size(); ++ni) {
        scans[ni].comps = top_components(net.nodes[ni].proc);
        for (Pid c : scans[ni].comps) scans[ni].expansions.push_back(&expand_component(c));
    }

    auto successor = [&](size_t ni, std::vector<std::pair<size_t, std::pair<size_t, Pid>>> repl,
                         const Interface* new_iface) {
        std::vector<NetNode> nodes = net.nodes;
        nodes[ni].proc = rebuild_process(scans[ni], repl);
        if (new_iface) nodes[ni].iface = *new_iface;
        return canonicalize_state(net.restricted, std::move(nodes));
    };

    bool has_instantaneous = false;

    // Intra-node rules: (pos) (sensread) (actunchg) (actchg) and (loccom).
    for (size_t ni = 0; ni < net.nodes.size(); ++ni) {
        const NetNode& node = net.nodes[ni];
        const NodeScan& scan = scans[ni];
        for (size_t ci = 0; ci < scan.comps.size(); ++ci) {
            const auto& basics = *scan.expansions[ci];
            for (size_t bi = 0; bi < basics.size(); ++bi) {
                const ProcTerm& t = term(basics[bi]);
                if (t.kind != PKind::Prefix) continue;
                switch (t.pk) {
                    case PrefixKind::Sleep: break;
                    case PrefixKind::GetPos: {
                        Pid res = canon_term(substitute(t.cont, t.bind, loc_value(node.loc)));
                        has_instantaneous = true;
                        emit(ReductionLabel::tau(), successor(ni, {{ci, {bi, res}}}, nullptr));
                        break;
                    }
                    case PrefixKind::ReadSensor: {
                        const Value* v = node.iface.sensor(t.device);
                        if (!v) throw ModelError(ModelError::IllFormed, "read of undefined sensor " + sym_text(t.device));
                        Pid res = canon_term(substitute(t.cont, t.bind, *v));
                        has_instantaneous = true;
                        emit(ReductionLabel::tau(), successor(ni, {{ci, {bi, res}}}, nullptr));
                        break;
                    }
                    case PrefixKind::WriteActuator: {
                        assert(!t.payload.is_var && "open payload at executable position");
                        const Value* cur = node.iface.actuator(t.device);
                        if (!cur)
                            throw ModelError(ModelError::IllFormed, "write to undefined actuator " + sym_text(t.device));
                        has_instantaneous = true;
                        if (*cur == t.payload.lit) {
                            emit(ReductionLabel::tau(), successor(ni, {{ci, {bi, t.cont}}}, nullptr));
                        } else {
                            Interface iface = node.iface;
                            iface.set_actuator(t.device, t.payload.lit);
                            emit(ReductionLabel::act(t.device), successor(ni, {{ci, {bi, t.cont}}}, &iface));
                        }
                        break;
                    }
                }
            }
        }

        // (loccom): a send and a receive on a local channel inside one node.
        std::vector<BasicRef> sends, recvs;
        for (size_t ci = 0; ci < scan.comps.size(); ++ci) {
            const auto& basics = *scan.expansions[ci];
            for (size_t bi = 0; bi < basics.size(); ++bi) {
                const ProcTerm& t = term(basics[bi]);
                if (t.kind != PKind::Timeout) continue;
                (t.is_send ? sends : recvs).push_back({ni, ci, bi, basics[bi]});
            }
        }
        for (const BasicRef& snd : sends) {
            const ProcTerm& ts = term(snd.pid);
            Range r = chan_range(ts.chan, net, u);
            if (!r.is_local()) continue;
            for (const BasicRef& rcv : recvs) {
                const ProcTerm& tr = term(rcv.pid);
                if (tr.chan != ts.chan) continue;
                if (snd.comp == rcv.comp && snd.basic == rcv.basic) continue;
                assert(!ts.payload.is_var);
                Pid send_res = ts.then_;
                Pid recv_res = canon_term(substitute(tr.then_, tr.bind, ts.payload.lit));
                has_instantaneous = true;
                std::vector<std::pair<size_t, std::pair<size_t, Pid>>> repl = {{snd.comp, {snd.basic, send_res}},
                                                                               {rcv.comp, {rcv.basic, recv_res}}};
                emit(ReductionLabel::tau(), successor(ni, std::move(repl), nullptr));
            }
        }
    }

    // (glbcom): a send and a receive on a ranged channel across two nodes
    // within transmission range.
    for (size_t ni = 0; ni < net.nodes.size(); ++ni) {
        for (size_t nj = 0; nj < net.nodes.size(); ++nj) {
            if (ni == nj) continue;
            const NodeScan& ss = scans[ni];
            const NodeScan& rs = scans[nj];
            for (size_t ci = 0; ci < ss.comps.size(); ++ci) {
                const auto& sb = *ss.expansions[ci];
                for (size_t bi = 0; bi < sb.size(); ++bi) {
                    const ProcTerm& ts = term(sb[bi]);
                    if (ts.kind != PKind::Timeout || !ts.is_send) continue;
                    Range r = chan_range(ts.chan, net, u);
                    if (r.is_local()) continue;
                    if (!u.in_range(r, net.nodes[ni].loc, net.nodes[nj].loc)) continue;
                    for (size_t cj = 0; cj < rs.comps.size(); ++cj) {
                        const auto& rb = *rs.expansions[cj];
                        for (size_t bj = 0; bj < rb.size(); ++bj) {
                            const ProcTerm& tr = term(rb[bj]);
                            if (tr.kind != PKind::Timeout || tr.is_send || tr.chan != ts.chan) continue;
                            assert(!ts.payload.is_var);
                            std::vector<NetNode> nodes = net.nodes;
                            nodes[ni].proc = rebuild_process(ss, {{ci, {bi, ts.then_}}});
                            nodes[nj].proc = rebuild_process(
                                rs, {{cj, {bj, canon_term(substitute(tr.then_, tr.bind, ts.payload.lit))}}});
                            has_instantaneous = true;
                            emit(ReductionLabel::tau(), canonicalize_state(net.restricted, std::move(nodes)));
                        }
                    }
                }
            }
        }
    }

    // Timed phase: (timestat) (timemob) (timepar) (timezero). The negative
    // premise of (timepar) is the absence of any instantaneous step.
    if (has_instantaneous && !opts.drop_time_negative_premise) return out;

    std::vector<Pid> residues(net.nodes.size());
    std::vector<std::vector<LocId>> targets(net.nodes.size());
    for (size_t ni = 0; ni < net.nodes.size(); ++ni) {
        const NodeScan& scan = scans[ni];
        std::vector<Pid> parts;
        bool node_local_insta = false;
        std::vector<std::pair<ChanRef, bool>> comm;  // (channel, is_send) for local-pair detection
        for (size_t ci = 0; ci < scan.comps.size(); ++ci) {
            for (Pid b : *scan.expansions[ci]) {
                const ProcTerm& t = term(b);
                if (t.kind == PKind::Timeout) {
                    parts.push_back(t.else_);
                    if (chan_range(t.chan, net, u).is_local()) comm.emplace_back(t.chan, t.is_send);
                } else if (t.pk == PrefixKind::Sleep) {
                    parts.push_back(t.cont);
                } else {
                    node_local_insta = true;  // pending @ / sensor read / actuator write
                }
            }
        }
        for (auto& [c, snd] : comm)
            for (auto& [c2, snd2] : comm)
                if (c == c2 && snd && !snd2) node_local_insta = true;
        if (node_local_insta) return out;  // no timed reduction from this network
        residues[ni] = p_par(std::move(parts));
        targets[ni] = net.nodes[ni].mobile ? u.reachable_locations(net.nodes[ni].loc, u.delta)
                                           : std::vector<LocId>{net.nodes[ni].loc};
    }

    // Cartesian product of per-node location choices.
    std::vector<size_t> pick(net.nodes.size(), 0);
    while (true) {
        std::vector<NetNode> nodes = net.nodes;
        for (size_t ni = 0; ni < nodes.size(); ++ni) {
            nodes[ni].proc = residues[ni];
            nodes[ni].loc = targets[ni][pick[ni]];
        }
        emit(ReductionLabel::time(), canonicalize_state(net.restricted, std::move(nodes)));
        size_t i = 0;
        for (; i < pick.size(); ++i) {
            if (++pick[i] < targets[i].size()) break;
            pick[i] = 0;
        }
        if (i == pick.size()) break;
        if (net.nodes.empty()) break;
    }

    return out;
}

std::vector<Barb> barbs(const CanonNet& net) {
    std::vector<Barb> out;
    for (const NetNode& n : net.nodes)
        for (auto& [a, v] : n.iface.actuators) out.push_back({a, n.loc, v});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool weak_barb(const CanonNet& net, const Barb& b, const ModelUniverse& u, size_t budget) {
    StateStore store;
    std::deque<uint32_t> frontier;
    frontier.push_back(store.intern(net));
    while (!frontier.empty()) {
        uint32_t id = frontier.front();
        frontier.pop_front();
        auto bs = barbs(store.state(id));
        if (std::binary_search(bs.begin(), bs.end(), b)) return true;
        for (auto& [label, succ] : reductions(store.state(id), u)) {
            if (label.kind == ReductionLabel::Act) continue;  // not part of the search relation
            bool fresh = false;
            uint32_t sid = store.intern(succ, &fresh);
            if (fresh) {
                if (store.size() > budget) throw BudgetExceeded(store.size(), frontier.size());
                frontier.push_back(sid);
            }
        }
    }
    return false;
}

CanonNet update_sensor(const CanonNet& net, Sym sensor, LocId h, const Value& v, const ModelUniverse& u) {
    const SensorDecl* decl = u.find_sensor(sensor);
    if (!decl) throw ModelError(ModelError::DanglingName, "unknown sensor " + sym_text(sensor));
    if (!decl->domain.contains(v))
        throw ModelError(ModelError::DomainViolation,
                         "value " + value_to_string(v, u) + " outside domain of " + sym_text(sensor));
    std::vector<NetNode> nodes = net.nodes;
    for (NetNode& n : nodes)
        if (n.loc == h && n.iface.sensor(sensor)) n.iface.set_sensor(sensor, v);
    return canonicalize_state(net.restricted, std::move(nodes));
}

std::vector<CanonNet> instantaneous_closure(const CanonNet& net, const ModelUniverse& u, size_t budget,
                                            const EngineOptions& opts) {
    StateStore store;
    std::deque<uint32_t> frontier;
    frontier.push_back(store.intern(net));
    for (size_t at = 0; at < store.size(); ++at) {
        for (auto& [label, succ] : reductions(store.state(at), u, opts)) {
            if (!label.instantaneous()) continue;
            bool fresh = false;
            store.intern(succ, &fresh);
            if (fresh && store.size() > budget) throw BudgetExceeded(store.size(), 0);
        }
    }
    std::vector<CanonNet> out;
    for (size_t i = 0; i < store.size(); ++i) out.push_back(store.state(i));
    return out;
}

}  // namespace iotsem
