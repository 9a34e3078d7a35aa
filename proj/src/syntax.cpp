#include "iotsem/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace iotsem {

// --------------------------------------------------------------------------
// Boolean expressions
// --------------------------------------------------------------------------

int value_expr_cmp(const ValueExpr& a, const ValueExpr& b) {
    if (a.is_var != b.is_var) return a.is_var ? 1 : -1;
    if (a.is_var) return sym_cmp(a.var, b.var);
    return value_cmp(a.lit, b.lit);
}

BExprPtr BoolExpr::literal(bool v) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = BKind::Lit;
    e->lit = v;
    return e;
}

static BExprPtr binop(BKind k, ValueExpr l, ValueExpr r) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = k;
    e->a = l;
    e->b = r;
    return e;
}

BExprPtr BoolExpr::eq(ValueExpr l, ValueExpr r) { return binop(BKind::Eq, l, r); }
BExprPtr BoolExpr::lt(ValueExpr l, ValueExpr r) { return binop(BKind::Lt, l, r); }
BExprPtr BoolExpr::leq(ValueExpr l, ValueExpr r) { return binop(BKind::Leq, l, r); }

BExprPtr BoolExpr::negate(BExprPtr e) {
    auto r = std::make_shared<BoolExpr>();
    r->kind = BKind::Not;
    r->x = std::move(e);
    return r;
}

BExprPtr BoolExpr::conj(BExprPtr l, BExprPtr r) {
    auto e = std::make_shared<BoolExpr>();
    e->kind = BKind::And;
    e->x = std::move(l);
    e->y = std::move(r);
    return e;
}

size_t BoolExpr::hash() const {
    size_t h = static_cast<size_t>(kind) * 0x9e3779b9u;
    switch (kind) {
        case BKind::Lit: hash_mix(h, lit ? 1 : 2); break;
        case BKind::Eq:
        case BKind::Lt:
        case BKind::Leq:
            hash_mix(h, a.hash());
            hash_mix(h, b.hash());
            break;
        case BKind::Not: hash_mix(h, x->hash()); break;
        case BKind::And:
            hash_mix(h, x->hash());
            hash_mix(h, y->hash());
            break;
    }
    return h;
}

bool bexpr_equal(const BExprPtr& a, const BExprPtr& b) {
    if (a == b) return true;
    if (!a || !b || a->kind != b->kind) return false;
    switch (a->kind) {
        case BKind::Lit: return a->lit == b->lit;
        case BKind::Eq:
        case BKind::Lt:
        case BKind::Leq: return a->a == b->a && a->b == b->b;
        case BKind::Not: return bexpr_equal(a->x, b->x);
        case BKind::And: return bexpr_equal(a->x, b->x) && bexpr_equal(a->y, b->y);
    }
    return false;
}

int bexpr_cmp(const BExprPtr& a, const BExprPtr& b) {
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    switch (a->kind) {
        case BKind::Lit: return a->lit == b->lit ? 0 : (a->lit ? 1 : -1);
        case BKind::Eq:
        case BKind::Lt:
        case BKind::Leq: {
            int c = value_expr_cmp(a->a, b->a);
            return c != 0 ? c : value_expr_cmp(a->b, b->b);
        }
        case BKind::Not: return bexpr_cmp(a->x, b->x);
        case BKind::And: {
            int c = bexpr_cmp(a->x, b->x);
            return c != 0 ? c : bexpr_cmp(a->y, b->y);
        }
    }
    return 0;
}

bool bexpr_closed(const BExprPtr& e) {
    switch (e->kind) {
        case BKind::Lit: return true;
        case BKind::Eq:
        case BKind::Lt:
        case BKind::Leq: return !e->a.is_var && !e->b.is_var;
        case BKind::Not: return bexpr_closed(e->x);
        case BKind::And: return bexpr_closed(e->x) && bexpr_closed(e->y);
    }
    return true;
}

bool bexpr_eval(const BExprPtr& e) {
    switch (e->kind) {
        case BKind::Lit: return e->lit;
        case BKind::Eq: return e->a.lit == e->b.lit;
        case BKind::Lt: return value_cmp(e->a.lit, e->b.lit) < 0;
        case BKind::Leq: return value_cmp(e->a.lit, e->b.lit) <= 0;
        case BKind::Not: return !bexpr_eval(e->x);
        case BKind::And: return bexpr_eval(e->x) && bexpr_eval(e->y);
    }
    return false;
}

static ValueExpr vexpr_subst(const ValueExpr& e, Sym var, const Value& v) {
    if (e.is_var && e.var == var) return ValueExpr::value(v);
    return e;
}

BExprPtr bexpr_substitute(const BExprPtr& e, Sym var, const Value& v) {
    switch (e->kind) {
        case BKind::Lit: return e;
        case BKind::Eq: return BoolExpr::eq(vexpr_subst(e->a, var, v), vexpr_subst(e->b, var, v));
        case BKind::Lt: return BoolExpr::lt(vexpr_subst(e->a, var, v), vexpr_subst(e->b, var, v));
        case BKind::Leq: return BoolExpr::leq(vexpr_subst(e->a, var, v), vexpr_subst(e->b, var, v));
        case BKind::Not: return BoolExpr::negate(bexpr_substitute(e->x, var, v));
        case BKind::And:
            return BoolExpr::conj(bexpr_substitute(e->x, var, v), bexpr_substitute(e->y, var, v));
    }
    return e;
}

// --------------------------------------------------------------------------
// Term pool
// --------------------------------------------------------------------------

bool ProcTerm::equal_shallow(const ProcTerm& o) const {
    if (kind != o.kind) return false;
    switch (kind) {
        case PKind::Nil: return true;
        case PKind::Prefix:
            return pk == o.pk && bind == o.bind && device == o.device && payload == o.payload && cont == o.cont;
        case PKind::Timeout:
            return is_send == o.is_send && chan == o.chan && bind == o.bind && payload == o.payload &&
                   then_ == o.then_ && else_ == o.else_;
        case PKind::Par: return parts == o.parts;
        case PKind::Cond: return bexpr_equal(guard, o.guard) && then_ == o.then_ && else_ == o.else_;
        case PKind::Var: return index == o.index;
        case PKind::Fix: return body == o.body;
    }
    return false;
}

void ProcTerm::compute_hash() {
    size_t h = static_cast<size_t>(kind) * 0x85ebca6bu + 7;
    auto mix_pid = [&](Pid p) { hash_mix(h, term(p).hash); };
    switch (kind) {
        case PKind::Nil: break;
        case PKind::Prefix:
            hash_mix(h, static_cast<size_t>(pk));
            if (pk == PrefixKind::GetPos || pk == PrefixKind::ReadSensor)
                hash_mix(h, std::hash<std::string>{}(sym_text(bind)));
            if (pk == PrefixKind::ReadSensor || pk == PrefixKind::WriteActuator)
                hash_mix(h, std::hash<std::string>{}(sym_text(device)));
            if (pk == PrefixKind::WriteActuator) hash_mix(h, payload.hash());
            mix_pid(cont);
            break;
        case PKind::Timeout:
            hash_mix(h, is_send ? 11 : 13);
            hash_mix(h, static_cast<size_t>(static_cast<int64_t>(chan) + (1ll << 32)));
            if (is_send)
                hash_mix(h, payload.hash());
            else
                hash_mix(h, std::hash<std::string>{}(sym_text(bind)));
            mix_pid(then_);
            mix_pid(else_);
            break;
        case PKind::Par:
            hash_mix(h, parts.size());
            for (Pid p : parts) mix_pid(p);
            break;
        case PKind::Cond:
            hash_mix(h, guard->hash());
            mix_pid(then_);
            mix_pid(else_);
            break;
        case PKind::Var: hash_mix(h, index); break;
        case PKind::Fix: mix_pid(body); break;
    }
    hash = h;
}

TermPool& TermPool::instance() {
    static TermPool pool;
    return pool;
}

TermPool::TermPool() {
    // Pid 0 is nil.
    ProcTerm nil;
    nil.kind = PKind::Nil;
    nil.hash = 0x6e696cu;
    terms_.push_back(nil);
    buckets_[nil.hash].push_back(0);
}

Pid TermPool::intern(ProcTerm t) {
    t.compute_hash();
    std::lock_guard<std::mutex> lock(mtx_);
    auto& bucket = buckets_[t.hash];
    for (Pid p : bucket)
        if (terms_[p].equal_shallow(t)) return p;
    terms_.push_back(std::move(t));
    Pid id = static_cast<Pid>(terms_.size() - 1);
    bucket.push_back(id);
    return id;
}

Pid p_nil() { return 0; }

Pid p_sleep(Pid cont) {
    ProcTerm t;
    t.kind = PKind::Prefix;
    t.pk = PrefixKind::Sleep;
    t.cont = cont;
    return TermPool::instance().intern(std::move(t));
}

Pid p_getpos(Sym var, Pid cont) {
    ProcTerm t;
    t.kind = PKind::Prefix;
    t.pk = PrefixKind::GetPos;
    t.bind = var;
    t.cont = cont;
    return TermPool::instance().intern(std::move(t));
}

Pid p_read(Sym var, Sym sensor, Pid cont) {
    ProcTerm t;
    t.kind = PKind::Prefix;
    t.pk = PrefixKind::ReadSensor;
    t.bind = var;
    t.device = sensor;
    t.cont = cont;
    return TermPool::instance().intern(std::move(t));
}

Pid p_write(ValueExpr v, Sym actuator, Pid cont) {
    ProcTerm t;
    t.kind = PKind::Prefix;
    t.pk = PrefixKind::WriteActuator;
    t.device = actuator;
    t.payload = v;
    t.cont = cont;
    return TermPool::instance().intern(std::move(t));
}

Pid p_timeout_send(ChanRef c, ValueExpr v, Pid then_, Pid else_) {
    ProcTerm t;
    t.kind = PKind::Timeout;
    t.is_send = true;
    t.chan = c;
    t.payload = v;
    t.then_ = then_;
    t.else_ = else_;
    return TermPool::instance().intern(std::move(t));
}

Pid p_timeout_recv(ChanRef c, Sym var, Pid then_, Pid else_) {
    ProcTerm t;
    t.kind = PKind::Timeout;
    t.is_send = false;
    t.chan = c;
    t.bind = var;
    t.then_ = then_;
    t.else_ = else_;
    return TermPool::instance().intern(std::move(t));
}

Pid p_par(Pid a, Pid b) { return p_par(std::vector<Pid>{a, b}); }

Pid p_par(std::vector<Pid> parts) {
    std::vector<Pid> flat;
    for (Pid p : parts) {
        const ProcTerm& t = term(p);
        if (t.kind == PKind::Nil) continue;
        if (t.kind == PKind::Par)
            flat.insert(flat.end(), t.parts.begin(), t.parts.end());
        else
            flat.push_back(p);
    }
    if (flat.empty()) return p_nil();
    if (flat.size() == 1) return flat[0];
    ProcTerm t;
    t.kind = PKind::Par;
    t.parts = std::move(flat);
    return TermPool::instance().intern(std::move(t));
}

Pid p_cond(BExprPtr g, Pid then_, Pid else_) {
    ProcTerm t;
    t.kind = PKind::Cond;
    t.guard = std::move(g);
    t.then_ = then_;
    t.else_ = else_;
    return TermPool::instance().intern(std::move(t));
}

Pid p_var(uint32_t index) {
    ProcTerm t;
    t.kind = PKind::Var;
    t.index = index;
    return TermPool::instance().intern(std::move(t));
}

Pid p_fix(Pid body) {
    ProcTerm t;
    t.kind = PKind::Fix;
    t.body = body;
    return TermPool::instance().intern(std::move(t));
}

// pi.P  ==>  fix X. timeout(pi.P, X); P sits under one extra binder, so its
// free de Bruijn indices are lifted by one.
static Pid lift_vars(Pid p, uint32_t depth) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil: return p;
        case PKind::Var: return t.index >= depth ? p_var(t.index + 1) : p;
        case PKind::Prefix: {
            ProcTerm c = t;
            c.cont = lift_vars(t.cont, depth);
            return TermPool::instance().intern(std::move(c));
        }
        case PKind::Timeout: {
            ProcTerm c = t;
            c.then_ = lift_vars(t.then_, depth);
            c.else_ = lift_vars(t.else_, depth);
            return TermPool::instance().intern(std::move(c));
        }
        case PKind::Par: {
            std::vector<Pid> parts;
            parts.reserve(t.parts.size());
            for (Pid q : t.parts) parts.push_back(lift_vars(q, depth));
            return p_par(std::move(parts));
        }
        case PKind::Cond: return p_cond(t.guard, lift_vars(t.then_, depth), lift_vars(t.else_, depth));
        case PKind::Fix: return p_fix(lift_vars(t.body, depth + 1));
    }
    return p;
}

Pid p_send_prefix(ChanRef c, ValueExpr v, Pid cont) {
    return p_fix(p_timeout_send(c, v, lift_vars(cont, 0), p_var(0)));
}

Pid p_recv_prefix(ChanRef c, Sym var, Pid cont) {
    return p_fix(p_timeout_recv(c, var, lift_vars(cont, 0), p_var(0)));
}

Pid p_sleep_n(uint32_t n, Pid cont) {
    Pid p = cont;
    for (uint32_t i = 0; i < n; ++i) p = p_sleep(p);
    return p;
}

// --------------------------------------------------------------------------
// Structural order
// --------------------------------------------------------------------------

int term_cmp(Pid a, Pid b) {
    if (a == b) return 0;
    const ProcTerm& ta = term(a);
    const ProcTerm& tb = term(b);
    if (ta.kind != tb.kind) return ta.kind < tb.kind ? -1 : 1;
    switch (ta.kind) {
        case PKind::Nil: return 0;
        case PKind::Prefix: {
            if (ta.pk != tb.pk) return ta.pk < tb.pk ? -1 : 1;
            if (ta.pk == PrefixKind::ReadSensor || ta.pk == PrefixKind::WriteActuator) {
                int c = sym_cmp(ta.device, tb.device);
                if (c) return c;
            }
            if (ta.pk == PrefixKind::WriteActuator) {
                int c = value_expr_cmp(ta.payload, tb.payload);
                if (c) return c;
            }
            if (ta.pk == PrefixKind::GetPos || ta.pk == PrefixKind::ReadSensor) {
                int c = sym_cmp(ta.bind, tb.bind);
                if (c) return c;
            }
            return term_cmp(ta.cont, tb.cont);
        }
        case PKind::Timeout: {
            if (ta.is_send != tb.is_send) return ta.is_send ? -1 : 1;
            if (ta.chan != tb.chan) return ta.chan < tb.chan ? -1 : 1;
            if (ta.is_send) {
                int c = value_expr_cmp(ta.payload, tb.payload);
                if (c) return c;
            } else {
                int c = sym_cmp(ta.bind, tb.bind);
                if (c) return c;
            }
            int c = term_cmp(ta.then_, tb.then_);
            if (c) return c;
            return term_cmp(ta.else_, tb.else_);
        }
        case PKind::Par: {
            if (ta.parts.size() != tb.parts.size()) return ta.parts.size() < tb.parts.size() ? -1 : 1;
            for (size_t i = 0; i < ta.parts.size(); ++i) {
                int c = term_cmp(ta.parts[i], tb.parts[i]);
                if (c) return c;
            }
            return 0;
        }
        case PKind::Cond: {
            int c = bexpr_cmp(ta.guard, tb.guard);
            if (c) return c;
            c = term_cmp(ta.then_, tb.then_);
            if (c) return c;
            return term_cmp(ta.else_, tb.else_);
        }
        case PKind::Var: return ta.index < tb.index ? -1 : (ta.index > tb.index ? 1 : 0);
        case PKind::Fix: return term_cmp(ta.body, tb.body);
    }
    return 0;
}

// --------------------------------------------------------------------------
// Substitution and unfolding
// --------------------------------------------------------------------------

Pid substitute(Pid p, Sym var, const Value& v) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil:
        case PKind::Var: return p;
        case PKind::Prefix: {
            if ((t.pk == PrefixKind::GetPos || t.pk == PrefixKind::ReadSensor) && t.bind == var) return p;  // shadow
            ProcTerm c = t;
            if (t.pk == PrefixKind::WriteActuator) c.payload = vexpr_subst(t.payload, var, v);
            c.cont = substitute(t.cont, var, v);
            return TermPool::instance().intern(std::move(c));
        }
        case PKind::Timeout: {
            ProcTerm c = t;
            if (t.is_send) {
                c.payload = vexpr_subst(t.payload, var, v);
                c.then_ = substitute(t.then_, var, v);
            } else {
                c.then_ = t.bind == var ? t.then_ : substitute(t.then_, var, v);  // receive binder shadows
            }
            c.else_ = substitute(t.else_, var, v);
            return TermPool::instance().intern(std::move(c));
        }
        case PKind::Par: {
            std::vector<Pid> parts;
            parts.reserve(t.parts.size());
            for (Pid q : t.parts) parts.push_back(substitute(q, var, v));
            return p_par(std::move(parts));
        }
        case PKind::Cond:
            return p_cond(bexpr_substitute(t.guard, var, v), substitute(t.then_, var, v),
                          substitute(t.else_, var, v));
        case PKind::Fix: return p_fix(substitute(t.body, var, v));
    }
    return p;
}

// Replaces variable `idx` (at the surface) with a proc-closed term.
static Pid subst_pvar(Pid p, uint32_t idx, Pid repl, uint32_t depth) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil: return p;
        case PKind::Var:
            if (t.index == idx + depth) return repl;
            assert(t.index < idx + depth && "unfold applied to open term");
            return p;
        case PKind::Prefix: {
            ProcTerm c = t;
            c.cont = subst_pvar(t.cont, idx, repl, depth);
            return TermPool::instance().intern(std::move(c));
        }
        case PKind::Timeout: {
            ProcTerm c = t;
            c.then_ = subst_pvar(t.then_, idx, repl, depth);
            c.else_ = subst_pvar(t.else_, idx, repl, depth);
            return TermPool::instance().intern(std::move(c));
        }
        case PKind::Par: {
            std::vector<Pid> parts;
            parts.reserve(t.parts.size());
            for (Pid q : t.parts) parts.push_back(subst_pvar(q, idx, repl, depth));
            return p_par(std::move(parts));
        }
        case PKind::Cond:
            return p_cond(t.guard, subst_pvar(t.then_, idx, repl, depth), subst_pvar(t.else_, idx, repl, depth));
        case PKind::Fix: return p_fix(subst_pvar(t.body, idx, repl, depth + 1));
    }
    return p;
}

Pid unfold_fix(Pid fix_term) {
    const ProcTerm& t = term(fix_term);
    assert(t.kind == PKind::Fix);
    return subst_pvar(t.body, 0, fix_term, 0);
}

// --------------------------------------------------------------------------
// Static checks
// --------------------------------------------------------------------------

static bool proc_closed_at(Pid p, uint32_t depth) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil: return true;
        case PKind::Var: return t.index < depth;
        case PKind::Prefix: return proc_closed_at(t.cont, depth);
        case PKind::Timeout: return proc_closed_at(t.then_, depth) && proc_closed_at(t.else_, depth);
        case PKind::Par:
            for (Pid q : t.parts)
                if (!proc_closed_at(q, depth)) return false;
            return true;
        case PKind::Cond: return proc_closed_at(t.then_, depth) && proc_closed_at(t.else_, depth);
        case PKind::Fix: return proc_closed_at(t.body, depth + 1);
    }
    return true;
}

bool proc_closed(Pid p) { return proc_closed_at(p, 0); }

static bool vexpr_closed_in(const ValueExpr& e, const std::vector<Sym>& bound) {
    if (!e.is_var) return true;
    return std::find(bound.begin(), bound.end(), e.var) != bound.end();
}

static bool bexpr_closed_in(const BExprPtr& e, const std::vector<Sym>& bound) {
    switch (e->kind) {
        case BKind::Lit: return true;
        case BKind::Eq:
        case BKind::Lt:
        case BKind::Leq: return vexpr_closed_in(e->a, bound) && vexpr_closed_in(e->b, bound);
        case BKind::Not: return bexpr_closed_in(e->x, bound);
        case BKind::And: return bexpr_closed_in(e->x, bound) && bexpr_closed_in(e->y, bound);
    }
    return true;
}

static bool value_closed_in(Pid p, std::vector<Sym>& bound) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil:
        case PKind::Var: return true;
        case PKind::Prefix: {
            if (t.pk == PrefixKind::WriteActuator && !vexpr_closed_in(t.payload, bound)) return false;
            if (t.pk == PrefixKind::GetPos || t.pk == PrefixKind::ReadSensor) {
                bound.push_back(t.bind);
                bool ok = value_closed_in(t.cont, bound);
                bound.pop_back();
                return ok;
            }
            return value_closed_in(t.cont, bound);
        }
        case PKind::Timeout: {
            if (t.is_send) {
                if (!vexpr_closed_in(t.payload, bound)) return false;
                return value_closed_in(t.then_, bound) && value_closed_in(t.else_, bound);
            }
            bound.push_back(t.bind);
            bool ok = value_closed_in(t.then_, bound);
            bound.pop_back();
            return ok && value_closed_in(t.else_, bound);
        }
        case PKind::Par:
            for (Pid q : t.parts)
                if (!value_closed_in(q, bound)) return false;
            return true;
        case PKind::Cond:
            return bexpr_closed_in(t.guard, bound) && value_closed_in(t.then_, bound) &&
                   value_closed_in(t.else_, bound);
        case PKind::Fix: return value_closed_in(t.body, bound);
    }
    return true;
}

bool value_closed(Pid p) {
    std::vector<Sym> bound;
    return value_closed_in(p, bound);
}

// guard_floor: binders entered before this depth have a sigma prefix or a
// timeout else-branch on the path to the current position.
static bool time_guarded_at(Pid p, uint32_t depth, uint32_t guard_floor) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil: return true;
        case PKind::Var: {
            uint32_t binder_depth = depth - 1 - t.index;
            return binder_depth < guard_floor;
        }
        case PKind::Prefix:
            if (t.pk == PrefixKind::Sleep) return time_guarded_at(t.cont, depth, depth);
            return time_guarded_at(t.cont, depth, guard_floor);
        case PKind::Timeout:
            return time_guarded_at(t.then_, depth, guard_floor) && time_guarded_at(t.else_, depth, depth);
        case PKind::Par:
            for (Pid q : t.parts)
                if (!time_guarded_at(q, depth, guard_floor)) return false;
            return true;
        case PKind::Cond:
            return time_guarded_at(t.then_, depth, guard_floor) && time_guarded_at(t.else_, depth, guard_floor);
        case PKind::Fix: return time_guarded_at(t.body, depth + 1, guard_floor);
    }
    return true;
}

bool proc_time_guarded(Pid p) { return time_guarded_at(p, 0, 0); }

// --------------------------------------------------------------------------
// Interfaces, nodes
// --------------------------------------------------------------------------

static const Value* find_entry(const std::vector<std::pair<Sym, Value>>& entries, Sym name) {
    for (auto& e : entries)
        if (e.first == name) return &e.second;
    return nullptr;
}

static void set_entry(std::vector<std::pair<Sym, Value>>& entries, Sym name, Value v) {
    for (auto& e : entries)
        if (e.first == name) {
            e.second = v;
            return;
        }
    entries.emplace_back(name, v);
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return sym_cmp(a.first, b.first) < 0; });
}

const Value* Interface::sensor(Sym name) const { return find_entry(sensors, name); }
const Value* Interface::actuator(Sym name) const { return find_entry(actuators, name); }
void Interface::set_sensor(Sym name, Value v) { set_entry(sensors, name, v); }
void Interface::set_actuator(Sym name, Value v) { set_entry(actuators, name, v); }

void Interface::sort_entries() {
    auto lt = [](const auto& a, const auto& b) { return sym_cmp(a.first, b.first) < 0; };
    std::sort(sensors.begin(), sensors.end(), lt);
    std::sort(actuators.begin(), actuators.end(), lt);
}

size_t Interface::hash() const {
    size_t h = 0x1f2e3d4cu;
    for (auto& [n, v] : sensors) {
        hash_mix(h, std::hash<std::string>{}(sym_text(n)));
        hash_mix(h, v.hash());
    }
    hash_mix(h, 0xa5a5a5a5u);
    for (auto& [n, v] : actuators) {
        hash_mix(h, std::hash<std::string>{}(sym_text(n)));
        hash_mix(h, v.hash());
    }
    return h;
}

size_t NetNode::hash() const {
    size_t h = std::hash<std::string>{}(sym_text(name));
    hash_mix(h, iface.hash());
    hash_mix(h, term(proc).hash);
    hash_mix(h, mobile ? 3 : 5);
    hash_mix(h, loc);
    return h;
}

// --------------------------------------------------------------------------
// Well-formedness (Def 2.1) and artifact-level validation
// --------------------------------------------------------------------------

namespace {

struct DeviceUse {
    std::vector<Sym> sensors_read;
    std::vector<Sym> actuators_written;
};

void collect_devices(Pid p, DeviceUse& out) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil:
        case PKind::Var: return;
        case PKind::Prefix:
            if (t.pk == PrefixKind::ReadSensor) out.sensors_read.push_back(t.device);
            if (t.pk == PrefixKind::WriteActuator) out.actuators_written.push_back(t.device);
            collect_devices(t.cont, out);
            return;
        case PKind::Timeout:
            collect_devices(t.then_, out);
            collect_devices(t.else_, out);
            return;
        case PKind::Par:
            for (Pid q : t.parts) collect_devices(q, out);
            return;
        case PKind::Cond:
            collect_devices(t.then_, out);
            collect_devices(t.else_, out);
            return;
        case PKind::Fix: collect_devices(t.body, out);
    }
}

}  // namespace

std::string violation_to_string(const Violation& v) {
    static const char* names[] = {
        "duplicate node name",     "actuator shared across nodes", "node-dependent sensor shared across nodes",
        "undefined interface entry", "location-dependent sensor in mobile node", "unknown name",
        "value outside domain",    "open term",                    "recursion not time-guarded",
    };
    return std::string(names[v.kind]) + ": " + v.detail;
}

std::vector<Violation> check_well_formed(const Network& net, const ModelUniverse& u) {
    std::vector<Violation> out;
    std::vector<Sym> seen_names;
    std::vector<std::pair<Sym, Sym>> seen_actuators;     // (actuator, node)
    std::vector<std::pair<Sym, Sym>> seen_node_sensors;  // (sensor, node)

    for (const NetNode& node : net.nodes) {
        if (std::find(seen_names.begin(), seen_names.end(), node.name) != seen_names.end())
            out.push_back({Violation::DuplicateNodeName, sym_text(node.name)});
        seen_names.push_back(node.name);

        for (auto& [a, v] : node.iface.actuators) {
            for (auto& [prev, owner] : seen_actuators)
                if (prev == a && owner != node.name)
                    out.push_back({Violation::DuplicateActuator,
                                   sym_text(a) + " in " + sym_text(owner) + " and " + sym_text(node.name)});
            seen_actuators.emplace_back(a, node.name);
        }
        for (auto& [s, v] : node.iface.sensors) {
            const SensorDecl* decl = u.find_sensor(s);
            SensorKind kind = decl ? decl->kind : SensorKind::NodeDependent;
            if (kind == SensorKind::NodeDependent) {
                for (auto& [prev, owner] : seen_node_sensors)
                    if (prev == s && owner != node.name)
                        out.push_back({Violation::DuplicateNodeDependentSensor,
                                       sym_text(s) + " in " + sym_text(owner) + " and " + sym_text(node.name)});
                seen_node_sensors.emplace_back(s, node.name);
            } else if (node.mobile) {
                out.push_back({Violation::MobileLocationSensor, sym_text(s) + " in mobile node " + sym_text(node.name)});
            }
        }

        DeviceUse use;
        collect_devices(node.proc, use);
        for (Sym s : use.sensors_read)
            if (!node.iface.sensor(s))
                out.push_back({Violation::UndefinedInterfaceEntry,
                               "sensor " + sym_text(s) + " read in " + sym_text(node.name) + " but not in interface"});
        for (Sym a : use.actuators_written)
            if (!node.iface.actuator(a))
                out.push_back({Violation::UndefinedInterfaceEntry, "actuator " + sym_text(a) + " written in " +
                                                                       sym_text(node.name) + " but not in interface"});
    }
    return out;
}

std::vector<Violation> validate_network(const Network& net, const ModelUniverse& u) {
    std::vector<Violation> out = check_well_formed(net, u);

    for (int32_t c : net.restricted)
        if (c < 0 || static_cast<size_t>(c) >= u.channels.size())
            out.push_back({Violation::UnknownName, "restricted channel id " + std::to_string(c)});

    for (const NetNode& node : net.nodes) {
        if (node.loc >= u.locations.size())
            out.push_back({Violation::UnknownName, "location of node " + sym_text(node.name)});
        if (!proc_closed(node.proc))
            out.push_back({Violation::OpenTerm, "free process variable in " + sym_text(node.name)});
        if (!value_closed(node.proc))
            out.push_back({Violation::OpenTerm, "free value variable in " + sym_text(node.name)});
        if (!proc_time_guarded(node.proc))
            out.push_back({Violation::NotTimeGuarded, "node " + sym_text(node.name)});

        for (auto& [s, v] : node.iface.sensors) {
            const SensorDecl* decl = u.find_sensor(s);
            if (!decl)
                out.push_back({Violation::UnknownName, "sensor " + sym_text(s)});
            else if (!decl->domain.contains(v))
                out.push_back({Violation::ValueOutsideDomain,
                               "sensor " + sym_text(s) + " = " + value_to_string(v, u)});
        }
        for (auto& [a, v] : node.iface.actuators) {
            const ActuatorDecl* decl = u.find_actuator(a);
            if (!decl)
                out.push_back({Violation::UnknownName, "actuator " + sym_text(a)});
            else if (!decl->domain.contains(v))
                out.push_back({Violation::ValueOutsideDomain,
                               "actuator " + sym_text(a) + " = " + value_to_string(v, u)});
        }
        std::vector<int32_t> chans;
        collect_channels(node.proc, chans);
        for (int32_t c : chans)
            if (c < 0 || static_cast<size_t>(c) >= u.channels.size())
                out.push_back({Violation::UnknownName, "channel reference in " + sym_text(node.name)});
    }
    return out;
}

void collect_channels(Pid p, std::vector<int32_t>& out) {
    const ProcTerm& t = term(p);
    switch (t.kind) {
        case PKind::Nil:
        case PKind::Var: return;
        case PKind::Prefix: collect_channels(t.cont, out); return;
        case PKind::Timeout:
            if (std::find(out.begin(), out.end(), t.chan) == out.end()) out.push_back(t.chan);
            collect_channels(t.then_, out);
            collect_channels(t.else_, out);
            return;
        case PKind::Par:
            for (Pid q : t.parts) collect_channels(q, out);
            return;
        case PKind::Cond:
            collect_channels(t.then_, out);
            collect_channels(t.else_, out);
            return;
        case PKind::Fix: collect_channels(t.body, out);
    }
}

std::vector<int32_t> free_channels(const Network& net) {
    std::vector<int32_t> used;
    for (const NetNode& n : net.nodes) collect_channels(n.proc, used);
    std::vector<int32_t> out;
    for (int32_t c : used) {
        if (c < 0) continue;  // canonical restricted slot, bound by construction
        if (std::find(net.restricted.begin(), net.restricted.end(), c) != net.restricted.end()) continue;
        if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace iotsem
