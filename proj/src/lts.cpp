#include "iotsem/lts.hpp"

#include <algorithm>
#include <cassert>
#include <thread>

namespace iotsem {

size_t Label::hash() const {
    size_t h = static_cast<size_t>(kind) * 0x9e3779b9u + 3;
    if (name) hash_mix(h, std::hash<std::string>{}(sym_text(name)));
    hash_mix(h, static_cast<size_t>(static_cast<int64_t>(chan) + (1ll << 20)));
    hash_mix(h, value.hash());
    hash_mix(h, loc);
    return h;
}

std::string Label::to_string(const ModelUniverse& u) const {
    auto chan_text = [&]() -> std::string {
        if (is_restricted(chan)) return "#" + std::to_string(restricted_slot(chan));
        return sym_text(u.channels[chan].name);
    };
    switch (kind) {
        case Tau: return "tau";
        case Sigma: return "sigma";
        case Act: return "act(" + sym_text(name) + ")";
        case Send:
        case SendObs: return "snd(" + chan_text() + "," + value_to_string(value, u) + "," + u.loc_name(loc) + ")";
        case Recv:
        case RecvObs: return "rcv(" + chan_text() + "," + value_to_string(value, u) + "," + u.loc_name(loc) + ")";
        case SensorEnv:
            return "sensor(" + sym_text(name) + "," + u.loc_name(loc) + "," + value_to_string(value, u) + ")";
        case ActuatorEnv:
            return "actuator(" + sym_text(name) + "," + u.loc_name(loc) + "," + value_to_string(value, u) + ")";
    }
    return "?";
}

// --------------------------------------------------------------------------
// Intensional process semantics (SndP RcvP Sensor Actuator PosP Com ParP Fix
// TimeNil Delay Timeout TimeParP)
// --------------------------------------------------------------------------

std::vector<ProcStep> process_transitions(Pid p, const CanonNet& ctx, const ModelUniverse& u,
                                          const EngineOptions& opts) {
    std::vector<ProcStep> out;
    auto add = [&](ProcessLabel l, Pid q) {
        for (auto& [l2, q2] : out)
            if (l2 == l && q2 == q) return;
        out.emplace_back(l, q);
    };

    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil:
            add({ProcessLabel::Sigma, 0, Value{}, 0, 0}, p_nil());
            break;
        case PKind::Prefix:
            switch (t.pk) {
                case PrefixKind::Sleep:
                    add({ProcessLabel::Sigma, 0, Value{}, 0, 0}, t.cont);
                    break;
                case PrefixKind::GetPos:
                    for (LocId h = 0; h < u.locations.size(); ++h)
                        add({ProcessLabel::AtLoc, 0, Value{}, 0, h},
                            canon_term(substitute(t.cont, t.bind, Value::location(h))));
                    break;
                case PrefixKind::ReadSensor: {
                    const SensorDecl* decl = u.find_sensor(t.device);
                    if (!decl) throw ModelError(ModelError::DanglingName, "unknown sensor " + sym_text(t.device));
                    for (const Value& v : decl->domain.values)
                        add({ProcessLabel::SensorRead, 0, v, t.device, 0},
                            canon_term(substitute(t.cont, t.bind, v)));
                    break;
                }
                case PrefixKind::WriteActuator:
                    assert(!t.payload.is_var);
                    add({ProcessLabel::ActuatorWrite, 0, t.payload.lit, t.device, 0}, t.cont);
                    break;
            }
            break;
        case PKind::Timeout: {
            if (t.is_send) {
                assert(!t.payload.is_var);
                add({ProcessLabel::Out, t.chan, t.payload.lit, 0, 0}, t.then_);
            } else {
                for (const Value& v : chan_domain(t.chan, ctx, u).values)
                    add({ProcessLabel::In, t.chan, v, 0, 0}, canon_term(substitute(t.then_, t.bind, v)));
            }
            add({ProcessLabel::Sigma, 0, Value{}, 0, 0}, t.else_);
            break;
        }
        case PKind::Par: {
            std::vector<std::vector<ProcStep>> sub(t.parts.size());
            for (size_t i = 0; i < t.parts.size(); ++i) sub[i] = process_transitions(t.parts[i], ctx, u, opts);

            bool any_tau = false;
            // (ParP) and its symmetric closure
            for (size_t i = 0; i < t.parts.size(); ++i) {
                for (auto& [l, q] : sub[i]) {
                    if (l.kind == ProcessLabel::Sigma) continue;
                    if (l.kind == ProcessLabel::Tau) any_tau = true;
                    std::vector<Pid> parts = t.parts;
                    parts[i] = q;
                    add(l, canon_term(p_par(std::move(parts))));
                }
            }
            // (Com) and its symmetric closure: local channels only
            for (size_t i = 0; i < t.parts.size(); ++i) {
                for (auto& [li, qi] : sub[i]) {
                    if (li.kind != ProcessLabel::Out) continue;
                    if (!chan_range(li.chan, ctx, u).is_local()) continue;
                    for (size_t j = 0; j < t.parts.size(); ++j) {
                        if (i == j) continue;
                        for (auto& [lj, qj] : sub[j]) {
                            if (lj.kind != ProcessLabel::In || lj.chan != li.chan || !(lj.value == li.value)) continue;
                            std::vector<Pid> parts = t.parts;
                            parts[i] = qi;
                            parts[j] = qj;
                            any_tau = true;
                            add({ProcessLabel::Tau, 0, Value{}, 0, 0}, canon_term(p_par(std::move(parts))));
                        }
                    }
                }
            }
            // (TimeParP): every component can let time pass and the whole
            // composition has no tau step.
            if (!any_tau) {
                std::vector<Pid> residues;
                bool all_sigma = true;
                for (size_t i = 0; i < t.parts.size() && all_sigma; ++i) {
                    bool found = false;
                    for (auto& [l, q] : sub[i])
                        if (l.kind == ProcessLabel::Sigma) {
                            residues.push_back(q);
                            found = true;
                            break;
                        }
                    all_sigma = found;
                }
                if (all_sigma) add({ProcessLabel::Sigma, 0, Value{}, 0, 0}, canon_term(p_par(std::move(residues))));
            }
            break;
        }
        case PKind::Cond:
            // closed guards are resolved at canonicalization; transitions are
            // only derived for canonical terms
            throw ModelError(ModelError::IllFormed, "open guard at executable position");
        case PKind::Var: throw ModelError(ModelError::IllFormed, "free process variable at executable position");
        case PKind::Fix:
            if (opts.drop_fix_unfold) break;  // mutation: recursion is inert
            return process_transitions(canon_term(unfold_fix(p)), ctx, u, opts);
    }
    return out;
}

// --------------------------------------------------------------------------
// Intensional network semantics (Pos SensRead ActUnChg ActChg LocCom
// TimeStat TimeMob Snd Rcv GlbCom ParN TimePar TimeZero Res)
// --------------------------------------------------------------------------

namespace {

struct NodeSteps {
    std::vector<NetStep> visible;             // Tau / Act / Send / Recv, node already rebuilt
    std::vector<std::pair<Label, size_t>> sendrecv;  // index into `visible` for pairing
    bool has_tau = false;
    bool sigma_ok = false;
    Pid sigma_residue = 0;
};

}  // namespace

std::vector<NetStep> network_transitions(const CanonNet& net, const ModelUniverse& u, const EngineOptions& opts) {
    std::vector<NetStep> out;
    StateStore dedupe;
    std::vector<std::pair<Label, uint32_t>> seen;
    auto emit = [&](const Label& l, CanonNet s) {
        uint32_t id = dedupe.intern(std::move(s));
        for (auto& [l2, s2] : seen)
            if (l2 == l && s2 == id) return;
        seen.emplace_back(l, id);
        out.emplace_back(l, dedupe.state(id));
    };

    const size_t n = net.nodes.size();
    std::vector<NodeSteps> steps(n);
    std::vector<std::vector<std::pair<Label, std::pair<Pid, Interface>>>> raw(n);

    bool network_tau = false;
    for (size_t i = 0; i < n; ++i) {
        const NetNode& node = net.nodes[i];
        bool node_tau = false;
        for (auto& [pl, q] : process_transitions(node.proc, net, u, opts)) {
            switch (pl.kind) {
                case ProcessLabel::Sigma:
                    steps[i].sigma_ok = true;
                    steps[i].sigma_residue = q;
                    break;
                case ProcessLabel::AtLoc:
                    if (pl.loc == node.loc) {
                        raw[i].push_back({Label::tau(), {q, node.iface}});
                        node_tau = true;
                    }
                    break;
                case ProcessLabel::SensorRead: {
                    const Value* cur = node.iface.sensor(pl.device);
                    if (cur && *cur == pl.value) {
                        raw[i].push_back({Label::tau(), {q, node.iface}});
                        node_tau = true;
                    }
                    break;
                }
                case ProcessLabel::ActuatorWrite: {
                    const Value* cur = node.iface.actuator(pl.device);
                    if (!cur)
                        throw ModelError(ModelError::IllFormed, "write to undefined actuator " + sym_text(pl.device));
                    if (*cur == pl.value) {
                        raw[i].push_back({Label::tau(), {q, node.iface}});
                        node_tau = true;
                    } else {
                        Interface iface = node.iface;
                        iface.set_actuator(pl.device, pl.value);
                        raw[i].push_back({Label::act(pl.device), {q, iface}});
                    }
                    break;
                }
                case ProcessLabel::Tau:
                    raw[i].push_back({Label::tau(), {q, node.iface}});
                    node_tau = true;
                    break;
                case ProcessLabel::Out: {
                    Range r = chan_range(pl.chan, net, u);
                    if (!r.is_local())
                        raw[i].push_back({Label{Label::Send, 0, pl.chan, pl.value, node.loc}, {q, node.iface}});
                    break;
                }
                case ProcessLabel::In: {
                    Range r = chan_range(pl.chan, net, u);
                    if (!r.is_local())
                        raw[i].push_back({Label{Label::Recv, 0, pl.chan, pl.value, node.loc}, {q, node.iface}});
                    break;
                }
            }
        }
        if (node_tau) {
            steps[i].sigma_ok = false;  // premise of (TimeStat)/(TimeMob)
            network_tau = true;
        }
        steps[i].has_tau = node_tau;
    }

    auto node_successor = [&](size_t i, const std::pair<Pid, Interface>& upd) {
        std::vector<NetNode> nodes = net.nodes;
        nodes[i].proc = upd.first;
        nodes[i].iface = upd.second;
        return canonicalize_state(net.restricted, std::move(nodes));
    };

    // (ParN): per-node Tau/Act, plus Send/Recv surviving (Res).
    for (size_t i = 0; i < n; ++i) {
        for (auto& [l, upd] : raw[i]) {
            if (l.kind == Label::Send || l.kind == Label::Recv) {
                if (is_restricted(l.chan)) continue;  // (Res) blocks the observation
                emit(l, node_successor(i, upd));
            } else {
                emit(l, node_successor(i, upd));
            }
        }
    }

    // (GlbCom) and its symmetric closure.
    for (size_t i = 0; i < n; ++i) {
        for (auto& [ls, us] : raw[i]) {
            if (ls.kind != Label::Send) continue;
            for (size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                for (auto& [lr, ur] : raw[j]) {
                    if (lr.kind != Label::Recv || lr.chan != ls.chan || !(lr.value == ls.value)) continue;
                    if (!u.in_range(chan_range(ls.chan, net, u), net.nodes[j].loc, net.nodes[i].loc)) continue;
                    std::vector<NetNode> nodes = net.nodes;
                    nodes[i].proc = us.first;
                    nodes[i].iface = us.second;
                    nodes[j].proc = ur.first;
                    nodes[j].iface = ur.second;
                    network_tau = true;
                    emit(Label::tau(), canonicalize_state(net.restricted, std::move(nodes)));
                }
            }
        }
    }

    // (TimePar) / (TimeZero) / (TimeStat) / (TimeMob).
    bool sigma_allowed = !network_tau || opts.drop_time_negative_premise;
    if (sigma_allowed) {
        bool all_sigma = true;
        for (size_t i = 0; i < n; ++i)
            if (!steps[i].sigma_ok) all_sigma = false;
        if (all_sigma) {
            std::vector<std::vector<LocId>> targets(n);
            for (size_t i = 0; i < n; ++i)
                targets[i] = net.nodes[i].mobile ? u.reachable_locations(net.nodes[i].loc, u.delta)
                                                 : std::vector<LocId>{net.nodes[i].loc};
            std::vector<size_t> pick(n, 0);
            while (true) {
                std::vector<NetNode> nodes = net.nodes;
                for (size_t i = 0; i < n; ++i) {
                    nodes[i].proc = steps[i].sigma_residue;
                    nodes[i].loc = targets[i][pick[i]];
                }
                emit(Label::sigma(), canonicalize_state(net.restricted, std::move(nodes)));
                size_t i = 0;
                for (; i < n; ++i) {
                    if (++pick[i] < targets[i].size()) break;
                    pick[i] = 0;
                }
                if (i == n) break;
            }
        }
    }

    return out;
}

// --------------------------------------------------------------------------
// Extensional semantics (SndObs RcvObs SensEnv ActEnv on top of the
// inherited actions)
// --------------------------------------------------------------------------

std::vector<NetStep> extensional_transitions(const CanonNet& net, const ModelUniverse& u, const EngineOptions& opts) {
    std::vector<NetStep> out;
    StateStore dedupe;
    std::vector<std::pair<Label, uint32_t>> seen;
    auto emit = [&](const Label& l, CanonNet s) {
        uint32_t id = dedupe.intern(std::move(s));
        for (auto& [l2, s2] : seen)
            if (l2 == l && s2 == id) return;
        seen.emplace_back(l, id);
        out.emplace_back(l, dedupe.state(id));
    };

    for (auto& [l, s] : network_transitions(net, u, opts)) {
        switch (l.kind) {
            case Label::Tau:
            case Label::Sigma:
            case Label::Act: emit(l, s); break;
            case Label::Send:
                for (LocId k = 0; k < u.locations.size(); ++k)
                    if (u.in_range(chan_range(l.chan, net, u), l.loc, k))
                        emit(Label{Label::SendObs, 0, l.chan, l.value, k}, s);
                break;
            case Label::Recv:
                for (LocId k = 0; k < u.locations.size(); ++k)
                    if (u.in_range(chan_range(l.chan, net, u), k, l.loc))
                        emit(Label{Label::RecvObs, 0, l.chan, l.value, k}, s);
                break;
            default: break;
        }
    }

    // (SensEnv): nondeterministic sensor updates at every declared location;
    // off-target updates are identities and appear as self-loops.
    for (const SensorDecl& s : u.sensors)
        for (LocId h = 0; h < u.locations.size(); ++h)
            for (const Value& v : s.domain.values)
                emit(Label{Label::SensorEnv, s.name, 0, v, h}, update_sensor(net, s.name, h, v, u));

    // (ActEnv): the environment reads the current actuator values.
    for (const NetNode& node : net.nodes)
        for (auto& [a, v] : node.iface.actuators)
            emit(Label{Label::ActuatorEnv, a, 0, v, node.loc}, net);

    return out;
}

// --------------------------------------------------------------------------
// State space construction
// --------------------------------------------------------------------------

uint32_t TransitionSystem::label_id(const Label& l) {
    auto& bucket = label_buckets_[l.hash()];
    for (uint32_t id : bucket)
        if (labels[id] == l) return id;
    labels.push_back(l);
    uint32_t id = static_cast<uint32_t>(labels.size() - 1);
    bucket.push_back(id);
    return id;
}

TransitionSystem build_lts_multi(const std::vector<CanonNet>& initials, const ModelUniverse& u, LtsMode mode,
                                 size_t budget, const EngineOptions& opts, unsigned workers) {
    TransitionSystem ts;
    std::vector<uint32_t> frontier;
    for (const CanonNet& s : initials) {
        bool fresh = false;
        uint32_t id = ts.store.intern(s, &fresh);
        ts.initials.push_back(id);
        if (fresh) frontier.push_back(id);
    }

    auto derive = [&](const CanonNet& s) {
        return mode == LtsMode::Intensional ? network_transitions(s, u, opts) : extensional_transitions(s, u, opts);
    };

    while (!frontier.empty()) {
        std::vector<std::vector<NetStep>> results(frontier.size());
        if (workers > 1 && frontier.size() > 1) {
            std::vector<std::thread> pool;
            std::atomic<size_t> next{0};
            for (unsigned w = 0; w < workers; ++w)
                pool.emplace_back([&]() {
                    for (size_t i = next.fetch_add(1); i < frontier.size(); i = next.fetch_add(1))
                        results[i] = derive(ts.store.state(frontier[i]));
                });
            for (auto& t : pool) t.join();
        } else {
            for (size_t i = 0; i < frontier.size(); ++i) results[i] = derive(ts.store.state(frontier[i]));
        }

        std::vector<uint32_t> next_frontier;
        for (size_t i = 0; i < frontier.size(); ++i) {
            for (auto& [label, succ] : results[i]) {
                bool fresh = false;
                uint32_t dst = ts.store.intern(std::move(succ), &fresh);
                ts.edges.push_back({frontier[i], ts.label_id(label), dst});
                if (fresh) {
                    if (ts.store.size() > budget) throw BudgetExceeded(ts.store.size(), next_frontier.size());
                    next_frontier.push_back(dst);
                }
            }
        }
        frontier = std::move(next_frontier);
    }
    return ts;
}

TransitionSystem build_lts(const CanonNet& initial, const ModelUniverse& u, LtsMode mode, size_t budget,
                           const EngineOptions& opts, unsigned workers) {
    return build_lts_multi({initial}, u, mode, budget, opts, workers);
}

std::string export_graph(const TransitionSystem& ts, const ModelUniverse& u) {
    std::string out = "states " + std::to_string(ts.num_states()) + " init " +
                      std::to_string(ts.initials.empty() ? 0 : ts.initials[0]) + "\n";
    for (auto& e : ts.edges)
        out += std::to_string(e.src) + "\t" + ts.label(e.label).to_string(u) + "\t" + std::to_string(e.dst) + "\n";
    return out;
}

std::string export_dot(const TransitionSystem& ts, const ModelUniverse& u) {
    std::string out = "digraph lts {\n  rankdir=LR;\n";
    for (uint32_t init : ts.initials) out += "  " + std::to_string(init) + " [shape=doublecircle];\n";
    for (auto& e : ts.edges) {
        bool self_loop = e.src == e.dst;
        out += "  " + std::to_string(e.src) + " -> " + std::to_string(e.dst) + " [label=\"" +
               ts.label(e.label).to_string(u) + "\"" + (self_loop ? ",style=dashed" : "") + "];\n";
    }
    out += "}\n";
    return out;
}

}  // namespace iotsem
