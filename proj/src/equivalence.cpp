#include "iotsem/equivalence.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <unordered_set>

namespace iotsem {

namespace {

constexpr uint32_t kTauLabel = 0xffffffffu;

// Per-state adjacency split into tau edges and visible (labelled) edges.
struct Graph {
    size_t n = 0;
    std::vector<std::vector<uint32_t>> tau;
    std::vector<std::vector<std::pair<uint32_t, uint32_t>>> visible;  // (label, dst)
    std::vector<uint32_t> topo;                                       // tau successors before predecessors

    explicit Graph(const TransitionSystem& ts) {
        n = ts.num_states();
        tau.resize(n);
        visible.resize(n);
        for (auto& e : ts.edges) {
            if (ts.label(e.label).kind == Label::Tau) {
                if (e.src != e.dst) tau[e.src].push_back(e.dst);
            } else {
                visible[e.src].emplace_back(e.label, e.dst);
            }
        }
        for (auto& v : tau) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
        // Iterative DFS post-order over the tau DAG. Well-timedness rules out
        // tau cycles; detect them anyway rather than looping.
        std::vector<uint8_t> mark(n, 0);
        topo.reserve(n);
        for (uint32_t root = 0; root < n; ++root) {
            if (mark[root]) continue;
            std::vector<std::pair<uint32_t, size_t>> stack{{root, 0}};
            mark[root] = 1;
            while (!stack.empty()) {
                auto& [v, i] = stack.back();
                if (i < tau[v].size()) {
                    uint32_t w = tau[v][i++];
                    if (mark[w] == 1) throw ModelError(ModelError::NotTimeGuarded, "tau cycle in state space");
                    if (mark[w] == 0) {
                        mark[w] = 1;
                        stack.emplace_back(w, 0);
                    }
                } else {
                    mark[v] = 2;
                    topo.push_back(v);
                    stack.pop_back();
                }
            }
        }
    }

    std::vector<uint32_t> tau_closure(uint32_t s) const {
        std::vector<uint32_t> out{s};
        std::unordered_set<uint32_t> seen{s};
        for (size_t i = 0; i < out.size(); ++i)
            for (uint32_t w : tau[out[i]])
                if (seen.insert(w).second) out.push_back(w);
        return out;
    }

    // s ==l==> t (tau* l tau*) for visible l; s ==> t for l == kTauLabel.
    std::vector<uint32_t> weak_succ(uint32_t s, uint32_t label) const {
        std::unordered_set<uint32_t> result;
        if (label == kTauLabel) {
            for (uint32_t t : tau_closure(s)) result.insert(t);
        } else {
            for (uint32_t x : tau_closure(s))
                for (auto& [l, y] : visible[x])
                    if (l == label)
                        for (uint32_t t : tau_closure(y)) result.insert(t);
        }
        return {result.begin(), result.end()};
    }
};

using Sig = std::vector<std::pair<uint32_t, uint32_t>>;  // sorted (label, block)

void sorted_unique(std::vector<uint32_t>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

void sorted_unique(Sig& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Weak signatures of every state w.r.t. a block assignment, computed by
// dynamic programming along the tau DAG:
//   TB(s) = blocks weakly reachable via ==> from s
//   sig(s) = { (l, B(t'')) : s ==> . -l-> . ==> t'' } + { (tau, b) : b in TB(s) }
std::vector<Sig> weak_signatures(const Graph& g, const std::vector<uint32_t>& block) {
    std::vector<std::vector<uint32_t>> tb(g.n);
    std::vector<Sig> ap(g.n);
    for (uint32_t s : g.topo) {
        std::vector<uint32_t> blocks{block[s]};
        Sig pairs;
        for (uint32_t w : g.tau[s]) {
            blocks.insert(blocks.end(), tb[w].begin(), tb[w].end());
            pairs.insert(pairs.end(), ap[w].begin(), ap[w].end());
        }
        sorted_unique(blocks);
        for (auto& [l, t] : g.visible[s])
            for (uint32_t b : tb[t]) pairs.emplace_back(l, b);
        sorted_unique(pairs);
        tb[s] = std::move(blocks);
        ap[s] = std::move(pairs);
    }
    std::vector<Sig> sig(g.n);
    for (uint32_t s = 0; s < g.n; ++s) {
        sig[s] = std::move(ap[s]);
        for (uint32_t b : tb[s]) sig[s].emplace_back(kTauLabel, b);
        sorted_unique(sig[s]);
    }
    return sig;
}

std::vector<uint32_t> refine_once(const Graph& g, const std::vector<uint32_t>& block, size_t& block_count) {
    std::vector<Sig> sig = weak_signatures(g, block);
    std::map<Sig, uint32_t> ids;
    std::vector<uint32_t> next(g.n);
    for (uint32_t s = 0; s < g.n; ++s) {
        auto [it, fresh] = ids.emplace(sig[s], static_cast<uint32_t>(ids.size()));
        next[s] = it->second;
    }
    block_count = ids.size();
    return next;
}

// Attacker/defender replay over the refinement history to produce a short
// distinguishing label sequence.
std::vector<std::string> extract_witness(const Graph& g, const std::vector<std::vector<uint32_t>>& history,
                                         uint32_t s, uint32_t t, const TransitionSystem& ts,
                                         const ModelUniverse& u) {
    auto separation_round = [&](uint32_t a, uint32_t b) -> size_t {
        for (size_t r = 0; r < history.size(); ++r)
            if (history[r][a] != history[r][b]) return r;
        return history.size();  // never separated
    };

    std::vector<std::string> seq;
    uint32_t a = s, b = t;
    size_t r = separation_round(a, b);
    while (r < history.size()) {
        std::vector<Sig> sig = weak_signatures(g, history[r - 1]);
        Sig diff;
        std::set_symmetric_difference(sig[a].begin(), sig[a].end(), sig[b].begin(), sig[b].end(),
                                      std::back_inserter(diff));
        assert(!diff.empty());
        auto [label, target_block] = diff.front();
        bool a_has = std::binary_search(sig[a].begin(), sig[a].end(), diff.front());
        uint32_t attacker = a_has ? a : b;
        uint32_t defender = a_has ? b : a;

        seq.push_back(label == kTauLabel ? "tau" : ts.label(label).to_string(u));

        // attacker move into the target block
        uint32_t attacker_next = attacker;
        for (uint32_t x : g.weak_succ(attacker, label))
            if (history[r - 1][x] == target_block) {
                attacker_next = x;
                break;
            }
        // defender picks the reply that survives longest
        auto replies = g.weak_succ(defender, label);
        if (replies.empty()) break;
        uint32_t defender_next = replies.front();
        size_t best = 0;
        for (uint32_t y : replies) {
            size_t sr = separation_round(attacker_next, y);
            if (sr > best) {
                best = sr;
                defender_next = y;
            }
        }
        size_t next_round = separation_round(attacker_next, defender_next);
        assert(next_round < r);
        a = attacker_next;
        b = defender_next;
        r = next_round;
        if (r == 0) break;
    }
    return seq;
}

}  // namespace

EquivalenceVerdict weak_bisimilar(const CanonNet& m, const CanonNet& n, const ModelUniverse& u, size_t budget,
                                  const EngineOptions& opts, unsigned workers) {
    TransitionSystem ts = build_lts_multi({m, n}, u, LtsMode::Extensional, budget, opts, workers);
    Graph g(ts);

    std::vector<std::vector<uint32_t>> history;
    history.emplace_back(g.n, 0);  // round 0: a single block
    size_t count = 1;
    while (true) {
        size_t next_count = 0;
        auto next = refine_once(g, history.back(), next_count);
        if (next_count == count) break;
        history.push_back(std::move(next));
        count = next_count;
    }

    EquivalenceVerdict v;
    v.states_explored = ts.num_states();
    v.partition_count = count;
    uint32_t im = ts.initials[0], in = ts.initials[1];
    v.bisimilar = history.back()[im] == history.back()[in];
    if (!v.bisimilar) v.witness = extract_witness(g, history, im, in, ts, u);
    return v;
}

EquivalenceVerdict weak_bisimilar(const Network& m, const Network& n, const ModelUniverse& u, size_t budget) {
    return weak_bisimilar(canonicalize(m, u), canonicalize(n, u), u, budget);
}

// --------------------------------------------------------------------------
// Expansion
// --------------------------------------------------------------------------

namespace {

std::vector<uint32_t> reachable_from(const TransitionSystem& ts, uint32_t root) {
    std::vector<std::vector<uint32_t>> adj(ts.num_states());
    for (auto& e : ts.edges) adj[e.src].push_back(e.dst);
    std::vector<uint32_t> out{root};
    std::vector<bool> seen(ts.num_states(), false);
    seen[root] = true;
    for (size_t i = 0; i < out.size(); ++i)
        for (uint32_t w : adj[out[i]])
            if (!seen[w]) {
                seen[w] = true;
                out.push_back(w);
            }
    return out;
}

}  // namespace

bool expansion(const CanonNet& m, const CanonNet& n, const ModelUniverse& u, size_t budget) {
    TransitionSystem ts = build_lts_multi({m, n}, u, LtsMode::Extensional, budget);
    Graph g(ts);

    std::vector<uint32_t> left = reachable_from(ts, ts.initials[0]);
    std::vector<uint32_t> right = reachable_from(ts, ts.initials[1]);
    std::vector<int32_t> lidx(ts.num_states(), -1), ridx(ts.num_states(), -1);
    for (size_t i = 0; i < left.size(); ++i) lidx[left[i]] = static_cast<int32_t>(i);
    for (size_t i = 0; i < right.size(); ++i) ridx[right[i]] = static_cast<int32_t>(i);

    // tau+ closure for the right side's answers to a left tau.
    auto tau_plus = [&](uint32_t s) {
        std::unordered_set<uint32_t> out;
        for (uint32_t w : g.tau[s])
            for (uint32_t t : g.tau_closure(w)) out.insert(t);
        return std::vector<uint32_t>(out.begin(), out.end());
    };

    std::vector<std::vector<bool>> ok(left.size(), std::vector<bool>(right.size(), true));
    auto alive = [&](uint32_t p, uint32_t q) {
        return lidx[p] >= 0 && ridx[q] >= 0 && ok[lidx[p]][ridx[q]];
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i < left.size(); ++i) {
            for (size_t j = 0; j < right.size(); ++j) {
                if (!ok[i][j]) continue;
                uint32_t p = left[i], q = right[j];
                bool good = true;

                // p's strong moves answered weakly by q (tau answered by >= 1 tau)
                for (uint32_t p2 : g.tau[p]) {
                    bool found = false;
                    for (uint32_t q2 : tau_plus(q))
                        if (alive(p2, q2)) found = true;
                    if (!found) {
                        good = false;
                        break;
                    }
                }
                if (good)
                    for (auto& [l, p2] : g.visible[p]) {
                        bool found = false;
                        for (uint32_t q2 : g.weak_succ(q, l))
                            if (alive(p2, q2)) found = true;
                        if (!found) {
                            good = false;
                            break;
                        }
                    }
                // q's strong moves answered by p with zero-or-more tau
                if (good)
                    for (uint32_t q2 : g.tau[q]) {
                        bool found = false;
                        for (uint32_t p2 : g.tau_closure(p))
                            if (alive(p2, q2)) found = true;
                        if (!found) {
                            good = false;
                            break;
                        }
                    }
                if (good)
                    for (auto& [l, q2] : g.visible[q]) {
                        bool found = false;
                        for (uint32_t p2 : g.weak_succ(p, l))
                            if (alive(p2, q2)) found = true;
                        if (!found) {
                            good = false;
                            break;
                        }
                    }

                if (!good) {
                    ok[i][j] = false;
                    changed = true;
                }
            }
        }
    }
    return ok[lidx[ts.initials[0]]][ridx[ts.initials[1]]];
}

bool expansion(const Network& m, const Network& n, const ModelUniverse& u, size_t budget) {
    return expansion(canonicalize(m, u), canonicalize(n, u), u, budget);
}

// --------------------------------------------------------------------------
// Algebraic laws
// --------------------------------------------------------------------------

namespace {

struct LawsCtx {
    ModelUniverse u;
    LocId la, lb, lc;
    int32_t cl, cs, ci, cb, cg;
    Sym sn, aa, ab;
    Sym n1, n2;

    LawsCtx() {
        la = u.add_location(sym("la"));
        lb = u.add_location(sym("lb"));
        lc = u.add_location(sym("lc"));
        u.set_distance(la, lb, 1);
        u.set_distance(lb, lc, 1);
        u.set_distance(la, lc, 2);
        u.delta = 1;
        ValueDomain ints{{Value::integer(1), Value::integer(2)}};
        cl = u.add_channel(sym("cl"), Range::local(), ints);
        cs = u.add_channel(sym("cs"), Range::finite(0), ints);
        ci = u.add_channel(sym("ci"), Range::infinite(), ints);
        cb = u.add_channel(sym("cb"), Range::infinite(), ints);
        ValueDomain locs{{Value::location(la), Value::location(lb), Value::location(lc)}};
        cg = u.add_channel(sym("cg"), Range::infinite(), locs);
        sn = sym("sn");
        u.add_sensor(sn, SensorKind::NodeDependent, ints);
        aa = sym("aa");
        ab = sym("ab");
        u.add_actuator(aa, ints);
        u.add_actuator(ab, ints);
        u.finalize();
        n1 = sym("n1");
        n2 = sym("n2");
    }

    Network single(Sym name, Interface iface, Pid proc, bool mobile, LocId loc) const {
        Network net;
        net.nodes.push_back({name, std::move(iface), proc, mobile, loc});
        return net;
    }
};

ValueExpr vi(int64_t n) { return ValueExpr::value(Value::integer(n)); }
ValueExpr vv(const char* x) { return ValueExpr::variable(sym(x)); }

}  // namespace

ModelUniverse laws_universe() { return LawsCtx().u; }

std::vector<LawResult> check_algebraic_laws(size_t budget) {
    LawsCtx c;
    std::vector<LawResult> out;

    auto law_expansion = [&](int num, const std::string& desc, const Network& lhs, const Network& rhs,
                             const Network& lhs_bad, const Network& rhs_bad) {
        bool pos = expansion(rhs, lhs, c.u, budget) && weak_bisimilar(lhs, rhs, c.u, budget).bisimilar;
        bool neg = !weak_bisimilar(lhs_bad, rhs_bad, c.u, budget).bisimilar;
        out.push_back({num, desc, pos, neg});
    };
    auto law_bisim = [&](int num, const std::string& desc, const Network& lhs, const Network& rhs,
                         const Network& lhs_bad, const Network& rhs_bad) {
        bool pos = weak_bisimilar(lhs, rhs, c.u, budget).bisimilar;
        bool neg = !weak_bisimilar(lhs_bad, rhs_bad, c.u, budget).bisimilar;
        out.push_back({num, desc, pos, neg});
    };

    // Law 1: a completed actuator write is invisible when the value is
    // already shown and the rest of the process never touches the actuator.
    {
        Interface iface;
        iface.set_actuator(c.aa, Value::integer(1));
        Pid p = p_sleep(p_nil());
        Pid r = p_timeout_send(c.ci, vi(2), p_nil(), p_nil());
        Network lhs = c.single(c.n1, iface, p_par(p_write(vi(1), c.aa, p), r), false, c.la);
        Network rhs = c.single(c.n1, iface, p_par(p, r), false, c.la);
        Interface bad;
        bad.set_actuator(c.aa, Value::integer(2));  // side condition I(a)=v violated
        Network lhs_bad = c.single(c.n1, bad, p_par(p_write(vi(1), c.aa, p), r), false, c.la);
        Network rhs_bad = c.single(c.n1, bad, p_par(p, r), false, c.la);
        law_expansion(1, "actuator write of the displayed value", lhs, rhs, lhs_bad, rhs_bad);
    }

    // Law 2: reading the node position and substituting it.
    {
        Interface iface;
        Pid p = p_timeout_send(c.cg, vv("x"), p_nil(), p_nil());
        Pid r = p_sleep(p_nil());
        Network lhs = c.single(c.n1, iface, p_par(p_getpos(sym("x"), p), r), false, c.la);
        Pid p_at = p_timeout_send(c.cg, ValueExpr::value(Value::location(c.la)), p_nil(), p_nil());
        Network rhs = c.single(c.n1, iface, p_par(p_at, r), false, c.la);
        Pid p_wrong = p_timeout_send(c.cg, ValueExpr::value(Value::location(c.lb)), p_nil(), p_nil());
        Network rhs_bad = c.single(c.n1, iface, p_par(p_wrong, r), false, c.la);
        law_expansion(2, "position read substitutes the node location", lhs, rhs, lhs, rhs_bad);
    }

    // Law 3: intra-node communication on a local channel.
    {
        Interface iface;
        Pid p = p_sleep(p_nil());
        Pid q = p_timeout_send(c.ci, vv("x"), p_nil(), p_nil());
        Pid r = p_sleep(p_sleep(p_nil()));
        Pid lhs_p = p_par({p_timeout_send(c.cl, vi(1), p, p_nil()), p_timeout_recv(c.cl, sym("x"), q, p_nil()), r});
        Pid rhs_p = p_par({p, canon_term(substitute(q, sym("x"), Value::integer(1))), r});
        Network lhs = c.single(c.n1, iface, lhs_p, false, c.la);
        Network rhs = c.single(c.n1, iface, rhs_p, false, c.la);
        // violated: the channel is short-range, not local, so the components
        // cannot synchronise inside the node
        Pid bad_p = p_par({p_timeout_send(c.cs, vi(1), p, p_nil()), p_timeout_recv(c.cs, sym("x"), q, p_nil()), r});
        Network lhs_bad = c.single(c.n1, iface, bad_p, false, c.la);
        law_expansion(3, "intra-node communication on a local channel", lhs, rhs, lhs_bad, rhs);
    }

    // Law 4: communication on a restricted Internet channel across nodes.
    {
        Interface in1, in2;
        in1.set_actuator(c.aa, Value::integer(1));
        in2.set_actuator(c.ab, Value::integer(1));
        Pid p = p_write(vi(2), c.aa, p_nil());
        Pid q = p_timeout_send(c.cb, vv("x"), p_sleep(p_nil()), p_nil());
        Pid r = p_sleep(p_nil());
        Pid uu = p_sleep(p_nil());

        auto pair_net = [&](int32_t chan, Pid sender_head, Pid recv_head) {
            Network net;
            net.restricted.push_back(chan);
            net.nodes.push_back({c.n1, in1, p_par(sender_head, r), false, c.la});
            net.nodes.push_back({c.n2, in2, p_par(recv_head, uu), false, c.lc});
            return net;
        };
        Network lhs = pair_net(c.ci, p_timeout_send(c.ci, vi(1), p, p_nil()), p_timeout_recv(c.ci, sym("x"), q, p_nil()));
        Network rhs = pair_net(c.ci, p, canon_term(substitute(q, sym("x"), Value::integer(1))));
        // violated: short-range channel, nodes out of range
        Network lhs_bad =
            pair_net(c.cs, p_timeout_send(c.cs, vi(1), p, p_nil()), p_timeout_recv(c.cs, sym("x"), q, p_nil()));
        Network rhs_bad = pair_net(c.cs, p, canon_term(substitute(q, sym("x"), Value::integer(1))));
        law_expansion(4, "communication on a restricted Internet channel", lhs, rhs, lhs_bad, rhs_bad);
    }

    // Law 5: a process with no timeouts and no actuator writes is garbage.
    {
        Interface iface;
        iface.set_sensor(c.sn, Value::integer(1));
        Pid p = p_fix(p_sleep(p_read(sym("z"), c.sn, p_var(0))));
        Network lhs = c.single(c.n1, iface, p, false, c.la);
        Network rhs = c.single(c.n1, iface, p_nil(), false, c.la);
        Pid bad = p_timeout_send(c.ci, vi(1), p_nil(), p_nil());
        Network lhs_bad = c.single(c.n1, iface, bad, false, c.la);
        law_bisim(5, "processes without timeouts or writes are inert", lhs, rhs, lhs_bad, rhs);
    }

    // Law 6: a terminated node with no actuators equals the empty network.
    {
        Interface iface;
        iface.set_sensor(c.sn, Value::integer(1));
        Network lhs = c.single(c.n1, iface, p_nil(), false, c.la);
        Network rhs;  // 0
        Interface bad;
        bad.set_actuator(c.aa, Value::integer(1));
        Network lhs_bad = c.single(c.n1, bad, p_nil(), false, c.la);
        law_bisim(6, "empty-interface terminated node equals 0", lhs, rhs, lhs_bad, rhs);
    }

    // Law 7: anonymity and mobility of empty-interface nodes using only
    // Internet or local channels.
    {
        Interface iface;
        Pid p = p_fix(p_timeout_send(c.ci, vi(1), p_sleep(p_var(0)), p_var(0)));
        Network lhs = c.single(c.n1, iface, p, true, c.la);
        Network rhs = c.single(c.n2, iface, p, false, c.lc);
        Pid bad = p_fix(p_timeout_send(c.cs, vi(1), p_sleep(p_var(0)), p_var(0)));
        Network lhs_bad = c.single(c.n1, iface, bad, true, c.la);
        Network rhs_bad = c.single(c.n2, iface, bad, false, c.lc);
        law_bisim(7, "unobservable identity, mobility and position", lhs, rhs, lhs_bad, rhs_bad);
    }

    return out;
}

// --------------------------------------------------------------------------
// Observers
// --------------------------------------------------------------------------

namespace {

Sym fresh_name(const ModelUniverse& u, const std::string& base) {
    std::string name = base;
    int i = 0;
    while (u.find_sensor(sym(name)) || u.find_actuator(sym(name)) || u.find_channel(sym(name)))
        name = base + std::to_string(i++);
    return sym(name);
}

}  // namespace

ObserverTest build_observer(const Label& action, ModelUniverse& u) {
    if (action.kind == Label::SensorEnv || action.kind == Label::ActuatorEnv)
        throw UnobservableAction("no physical observer context exists for " + action.to_string(u));

    Sym flag = fresh_name(u, "watch");
    ValueDomain flag_dom{{Value::integer(0), Value::integer(1)}};
    u.add_actuator(flag, flag_dom);

    ObserverTest obs;
    obs.flag_actuator = flag;
    obs.flag_raised = Value::integer(1);
    Interface iface;
    iface.set_actuator(flag, Value::integer(0));

    Pid raise_lower = p_write(vi(1), flag, p_write(vi(0), flag, p_nil()));
    Pid proc;
    switch (action.kind) {
        case Label::Act:
        case Label::Tau:
            // timing bookkeeping: the raised flag can only be seen while no
            // time step has fired yet
            proc = p_write(vi(1), flag, p_nil());
            break;
        case Label::SendObs: {
            BExprPtr check = BoolExpr::eq(ValueExpr::variable(sym("x")), ValueExpr::value(action.value));
            proc = p_timeout_recv(action.chan, sym("x"), p_cond(check, raise_lower, p_nil()), p_nil());
            break;
        }
        case Label::RecvObs:
            proc = p_timeout_send(action.chan, ValueExpr::value(action.value), raise_lower, p_nil());
            break;
        case Label::Sigma: proc = p_sleep(raise_lower); break;
        default: throw UnobservableAction("unsupported observable");
    }
    obs.node = NetNode{fresh_name(u, "obsnode"), std::move(iface), proc, false, action.loc};
    return obs;
}

CanonNet compose_observer(const CanonNet& net, const ObserverTest& obs, const ModelUniverse&) {
    std::vector<NetNode> nodes = net.nodes;
    nodes.push_back(obs.node);
    return canonicalize_state(net.restricted, std::move(nodes));
}

bool observer_reaches_flag(const CanonNet& composed, const ObserverTest& obs, const ModelUniverse& u,
                           bool instantaneous_only, size_t budget) {
    Barb flag{obs.flag_actuator, obs.node.loc, obs.flag_raised};
    StateStore store;
    store.intern(composed);
    for (size_t at = 0; at < store.size(); ++at) {
        auto bs = barbs(store.state(at));
        if (std::binary_search(bs.begin(), bs.end(), flag)) return true;
        for (auto& [label, succ] : reductions(store.state(at), u)) {
            if (instantaneous_only && !label.instantaneous()) continue;
            bool fresh = false;
            store.intern(succ, &fresh);
            if (fresh && store.size() > budget) throw BudgetExceeded(store.size(), 0);
        }
    }
    return false;
}

}  // namespace iotsem
