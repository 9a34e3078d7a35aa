#include "iotsem/congruence.hpp"

#include <algorithm>
#include <cassert>

namespace iotsem {

bool CanonNet::operator==(const CanonNet& o) const {
    if (hash != o.hash || restricted.size() != o.restricted.size() || nodes.size() != o.nodes.size()) return false;
    for (size_t i = 0; i < restricted.size(); ++i)
        if (!restricted[i].same(o.restricted[i])) return false;
    return nodes == o.nodes;
}

void CanonNet::compute_hash() {
    size_t h = 0xc0ffee11u;
    hash_mix(h, restricted.size());
    for (auto& r : restricted) hash_mix(h, r.hash());
    hash_mix(h, nodes.size());
    for (auto& n : nodes) hash_mix(h, n.hash());
    hash = h;
}

std::string CanonNet::hash_hex() const {
    char buf[20];
    snprintf(buf, sizeof buf, "%016zx", hash);
    return buf;
}

Pid canon_term(Pid p) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil:
        case PKind::Var: return p;
        case PKind::Prefix: {
            Pid c = canon_term(t.cont);
            if (c == t.cont) return p;
            ProcTerm copy = t;
            copy.cont = c;
            return TermPool::instance().intern(std::move(copy));
        }
        case PKind::Timeout: {
            Pid a = canon_term(t.then_);
            Pid b = canon_term(t.else_);
            if (a == t.then_ && b == t.else_) return p;
            ProcTerm copy = t;
            copy.then_ = a;
            copy.else_ = b;
            return TermPool::instance().intern(std::move(copy));
        }
        case PKind::Par: {
            std::vector<Pid> parts;
            parts.reserve(t.parts.size());
            for (Pid q : t.parts) parts.push_back(canon_term(q));
            std::sort(parts.begin(), parts.end(), [](Pid a, Pid b) { return term_cmp(a, b) < 0; });
            return p_par(std::move(parts));
        }
        case PKind::Cond: {
            if (bexpr_closed(t.guard)) return canon_term(bexpr_eval(t.guard) ? t.then_ : t.else_);
            return p_cond(t.guard, canon_term(t.then_), canon_term(t.else_));
        }
        case PKind::Fix: {
            Pid b = canon_term(t.body);
            return b == t.body ? p : p_fix(b);
        }
    }
    return p;
}

namespace {

// First-occurrence order of restricted slot references, scanning nodes in
// their canonical order and terms structurally.
void scan_slots(Pid p, std::vector<uint32_t>& order, std::vector<bool>& seen) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil:
        case PKind::Var: return;
        case PKind::Prefix: scan_slots(t.cont, order, seen); return;
        case PKind::Timeout: {
            if (is_restricted(t.chan)) {
                uint32_t slot = restricted_slot(t.chan);
                if (slot < seen.size() && !seen[slot]) {
                    seen[slot] = true;
                    order.push_back(slot);
                }
            }
            scan_slots(t.then_, order, seen);
            scan_slots(t.else_, order, seen);
            return;
        }
        case PKind::Par:
            for (Pid q : t.parts) scan_slots(q, order, seen);
            return;
        case PKind::Cond:
            scan_slots(t.then_, order, seen);
            scan_slots(t.else_, order, seen);
            return;
        case PKind::Fix: scan_slots(t.body, order, seen);
    }
}

Pid remap_slots(Pid p, const std::vector<int32_t>& slot_map) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil:
        case PKind::Var: return p;
        case PKind::Prefix: {
            Pid c = remap_slots(t.cont, slot_map);
            if (c == t.cont) return p;
            ProcTerm copy = t;
            copy.cont = c;
            return TermPool::instance().intern(std::move(copy));
        }
        case PKind::Timeout: {
            ProcTerm copy = t;
            if (is_restricted(t.chan)) {
                int32_t target = slot_map[restricted_slot(t.chan)];
                assert(target >= 0);
                copy.chan = restricted_ref(static_cast<uint32_t>(target));
            }
            copy.then_ = remap_slots(t.then_, slot_map);
            copy.else_ = remap_slots(t.else_, slot_map);
            if (copy.chan == t.chan && copy.then_ == t.then_ && copy.else_ == t.else_) return p;
            return TermPool::instance().intern(std::move(copy));
        }
        case PKind::Par: {
            std::vector<Pid> parts;
            parts.reserve(t.parts.size());
            for (Pid q : t.parts) parts.push_back(remap_slots(q, slot_map));
            return p_par(std::move(parts));
        }
        case PKind::Cond: {
            Pid a = remap_slots(t.then_, slot_map);
            Pid b = remap_slots(t.else_, slot_map);
            if (a == t.then_ && b == t.else_) return p;
            return p_cond(t.guard, a, b);
        }
        case PKind::Fix: {
            Pid b = remap_slots(t.body, slot_map);
            return b == t.body ? p : p_fix(b);
        }
    }
    return p;
}

void sort_nodes(std::vector<NetNode>& nodes) {
    std::sort(nodes.begin(), nodes.end(), [](const NetNode& a, const NetNode& b) {
        int c = sym_cmp(a.name, b.name);
        if (c) return c < 0;
        c = term_cmp(a.proc, b.proc);
        if (c) return c < 0;
        if (a.loc != b.loc) return a.loc < b.loc;
        if (a.mobile != b.mobile) return b.mobile;
        if (a.iface.sensors != b.iface.sensors) return a.iface.sensors < b.iface.sensors;
        return a.iface.actuators < b.iface.actuators;
    });
}

}  // namespace

CanonNet canonicalize_state(std::vector<RestrictedInfo> restricted, std::vector<NetNode> nodes) {
    for (auto& n : nodes) {
        n.proc = canon_term(n.proc);
        n.iface.sort_entries();
    }
    // Slot remapping changes channel ids inside terms, which feeds back into
    // component sorting; iterate to a fixpoint (reached immediately except in
    // adversarial symmetric terms).
    for (int round = 0; round < 4; ++round) {
        sort_nodes(nodes);
        std::vector<uint32_t> order;
        std::vector<bool> seen(restricted.size(), false);
        for (const NetNode& n : nodes) scan_slots(n.proc, order, seen);

        bool identity = order.size() == restricted.size();
        if (identity)
            for (size_t i = 0; i < order.size(); ++i)
                if (order[i] != i) identity = false;
        if (identity) break;

        std::vector<int32_t> slot_map(restricted.size(), -1);
        std::vector<RestrictedInfo> next;
        next.reserve(order.size());
        for (size_t i = 0; i < order.size(); ++i) {
            slot_map[order[i]] = static_cast<int32_t>(i);
            next.push_back(restricted[order[i]]);
        }
        restricted = std::move(next);  // unused slots are garbage collected
        for (auto& n : nodes) n.proc = canon_term(remap_slots(n.proc, slot_map));
    }

    CanonNet out;
    out.restricted = std::move(restricted);
    out.nodes = std::move(nodes);
    out.compute_hash();
    return out;
}

CanonNet canonicalize(const Network& net, const ModelUniverse& u) {
    std::vector<RestrictedInfo> infos;
    std::vector<int32_t> chan_to_slot(u.channels.size(), -1);
    for (int32_t c : net.restricted) {
        if (chan_to_slot[c] >= 0) continue;  // duplicate restriction of the same channel
        chan_to_slot[c] = static_cast<int32_t>(infos.size());
        infos.push_back({u.channels[c].range, u.channels[c].domain, u.channels[c].name});
    }

    // Rewrite universe channel ids under restriction into provisional slots.
    std::function<Pid(Pid)> rewrite = [&](Pid p) -> Pid {
        const ProcTerm& t = term(p);
        switch (t.kind) {
            case PKind::Nil:
            case PKind::Var: return p;
            case PKind::Prefix: {
                Pid c = rewrite(t.cont);
                if (c == t.cont) return p;
                ProcTerm copy = t;
                copy.cont = c;
                return TermPool::instance().intern(std::move(copy));
            }
            case PKind::Timeout: {
                ProcTerm copy = t;
                if (!is_restricted(t.chan) && chan_to_slot[t.chan] >= 0)
                    copy.chan = restricted_ref(static_cast<uint32_t>(chan_to_slot[t.chan]));
                copy.then_ = rewrite(t.then_);
                copy.else_ = rewrite(t.else_);
                if (copy.chan == t.chan && copy.then_ == t.then_ && copy.else_ == t.else_) return p;
                return TermPool::instance().intern(std::move(copy));
            }
            case PKind::Par: {
                std::vector<Pid> parts;
                for (Pid q : t.parts) parts.push_back(rewrite(q));
                return p_par(std::move(parts));
            }
            case PKind::Cond: {
                Pid a = rewrite(t.then_);
                Pid b = rewrite(t.else_);
                if (a == t.then_ && b == t.else_) return p;
                return p_cond(t.guard, a, b);
            }
            case PKind::Fix: {
                Pid b = rewrite(t.body);
                return b == t.body ? p : p_fix(b);
            }
        }
        return p;
    };

    std::vector<NetNode> nodes = net.nodes;
    for (auto& n : nodes) n.proc = rewrite(n.proc);
    return canonicalize_state(std::move(infos), std::move(nodes));
}

bool congruent(const Network& m, const Network& n, const ModelUniverse& u) {
    return canonicalize(m, u) == canonicalize(n, u);
}

Range chan_range(ChanRef c, const CanonNet& state, const ModelUniverse& u) {
    if (is_restricted(c)) return state.restricted[restricted_slot(c)].range;
    return u.channels[c].range;
}

const ValueDomain& chan_domain(ChanRef c, const CanonNet& state, const ModelUniverse& u) {
    if (is_restricted(c)) return state.restricted[restricted_slot(c)].domain;
    return u.channels[c].domain;
}

std::string chan_name(ChanRef c, const CanonNet& state, const ModelUniverse& u) {
    if (is_restricted(c)) {
        Sym src = state.restricted[restricted_slot(c)].source_name;
        return "#" + std::to_string(restricted_slot(c)) + (src ? "(" + sym_text(src) + ")" : "");
    }
    return sym_text(u.channels[c].name);
}

uint32_t StateStore::intern(CanonNet s, bool* fresh) {
    auto& bucket = buckets_[s.hash];
    for (uint32_t id : bucket)
        if (states_[id] == s) {
            if (fresh) *fresh = false;
            return id;
        }
    states_.push_back(std::move(s));
    uint32_t id = static_cast<uint32_t>(states_.size() - 1);
    bucket.push_back(id);
    if (fresh) *fresh = true;
    return id;
}

}  // namespace iotsem
