#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "iotsem/universe.hpp"

namespace iotsem {

// Channel reference inside a term: >= 0 indexes the universe's channel
// table, < 0 is a canonical restricted slot (slot i encoded as -1-i).
using ChanRef = int32_t;
inline ChanRef restricted_ref(uint32_t slot) { return -1 - static_cast<int32_t>(slot); }
inline bool is_restricted(ChanRef c) { return c < 0; }
inline uint32_t restricted_slot(ChanRef c) { return static_cast<uint32_t>(-1 - c); }

// A payload or guard operand: a ground value or a value variable.
struct ValueExpr {
    bool is_var = false;
    Sym var = 0;
    Value lit;

    static ValueExpr value(Value v) { return {false, 0, v}; }
    static ValueExpr variable(Sym x) { return {true, x, Value{}}; }

    bool operator==(const ValueExpr& o) const {
        if (is_var != o.is_var) return false;
        return is_var ? var == o.var : lit == o.lit;
    }
    size_t hash() const {
        size_t h = is_var ? 0x51ed2701u : 0x1b873593u;
        if (is_var)
            hash_mix(h, std::hash<std::string>{}(sym_text(var)));
        else
            hash_mix(h, lit.hash());
        return h;
    }
};

int value_expr_cmp(const ValueExpr& a, const ValueExpr& b);

// Decidable guards: equality, integer ordering, boolean connectives.
enum class BKind : uint8_t { Lit, Eq, Lt, Leq, Not, And };

struct BoolExpr;
using BExprPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
    BKind kind;
    bool lit = false;
    ValueExpr a, b;        // Eq / Lt / Leq
    BExprPtr x, y;         // Not (x) / And (x, y)

    static BExprPtr literal(bool v);
    static BExprPtr eq(ValueExpr l, ValueExpr r);
    static BExprPtr lt(ValueExpr l, ValueExpr r);
    static BExprPtr leq(ValueExpr l, ValueExpr r);
    static BExprPtr negate(BExprPtr e);
    static BExprPtr conj(BExprPtr l, BExprPtr r);

    size_t hash() const;
};

bool bexpr_equal(const BExprPtr& a, const BExprPtr& b);
int bexpr_cmp(const BExprPtr& a, const BExprPtr& b);
bool bexpr_closed(const BExprPtr& e);
// Total on closed expressions.
bool bexpr_eval(const BExprPtr& e);
BExprPtr bexpr_substitute(const BExprPtr& e, Sym var, const Value& v);

// ---------------------------------------------------------------------------
// Processes. Terms are hash-consed in a global pool; Pid is the handle.
// Process variables are de Bruijn indices counting enclosing fix binders,
// so alpha-equivalent recursions share one representation.
// ---------------------------------------------------------------------------

using Pid = uint32_t;

enum class PKind : uint8_t { Nil, Prefix, Timeout, Par, Cond, Var, Fix };
enum class PrefixKind : uint8_t { Sleep, GetPos, ReadSensor, WriteActuator };

struct ProcTerm {
    PKind kind = PKind::Nil;

    // Prefix
    PrefixKind pk = PrefixKind::Sleep;
    Sym bind = 0;       // GetPos / ReadSensor bound variable
    Sym device = 0;     // sensor or actuator name
    ValueExpr payload;  // WriteActuator value, Timeout send payload
    Pid cont = 0;

    // Timeout (communication with timeout)
    bool is_send = false;
    ChanRef chan = 0;
    Pid then_ = 0, else_ = 0;  // then_: continuation after the communication

    // Par
    std::vector<Pid> parts;  // canonical: flattened, sorted, no nil

    // Cond
    BExprPtr guard;

    // Var
    uint32_t index = 0;  // de Bruijn

    // Fix
    Pid body = 0;

    size_t hash = 0;

    bool equal_shallow(const ProcTerm& o) const;
    void compute_hash();
};

class TermPool {
public:
    static TermPool& instance();

    Pid intern(ProcTerm t);
    const ProcTerm& get(Pid p) const { return terms_[p]; }

private:
    TermPool();
    mutable std::mutex mtx_;
    std::deque<ProcTerm> terms_;
    std::unordered_map<size_t, std::vector<Pid>> buckets_;
};

inline const ProcTerm& term(Pid p) { return TermPool::instance().get(p); }

// Constructors (already canonical where trivially possible: Par is flattened
// and nil-free at build time but not sorted; sorting is done by canonicalize).
Pid p_nil();
Pid p_sleep(Pid cont);
Pid p_getpos(Sym var, Pid cont);
Pid p_read(Sym var, Sym sensor, Pid cont);
Pid p_write(ValueExpr v, Sym actuator, Pid cont);
Pid p_timeout_send(ChanRef c, ValueExpr v, Pid then_, Pid else_);
Pid p_timeout_recv(ChanRef c, Sym var, Pid then_, Pid else_);
Pid p_par(Pid a, Pid b);
Pid p_par(std::vector<Pid> parts);
Pid p_cond(BExprPtr g, Pid then_, Pid else_);
Pid p_var(uint32_t index);
Pid p_fix(Pid body);

// Derived forms used by the surface syntax and the case-study tables:
// a bare communication prefix pi.P stands for fix X. timeout(pi.P, X).
Pid p_send_prefix(ChanRef c, ValueExpr v, Pid cont);
Pid p_recv_prefix(ChanRef c, Sym var, Pid cont);
Pid p_sleep_n(uint32_t n, Pid cont);

// Total structural order (constructor tag, then fields, then children);
// stable across runs.
int term_cmp(Pid a, Pid b);

// Capture-avoiding substitution of a ground value for a value variable;
// GetPos/ReadSensor/Receive binders shadow.
Pid substitute(Pid p, Sym var, const Value& v);

// One unfolding of fix X.B, i.e. B{fix X.B / X}.
Pid unfold_fix(Pid fix_term);

bool proc_closed(Pid p);          // no free process variables
bool value_closed(Pid p);         // no free value variables
bool proc_time_guarded(Pid p);    // every fix body has its variable time-guarded

// ---------------------------------------------------------------------------
// Nodes and networks.
// ---------------------------------------------------------------------------

// Partial mapping from sensor and actuator names to current values, kept
// sorted by name spelling.
struct Interface {
    std::vector<std::pair<Sym, Value>> sensors;
    std::vector<std::pair<Sym, Value>> actuators;

    const Value* sensor(Sym name) const;
    const Value* actuator(Sym name) const;
    void set_sensor(Sym name, Value v);
    void set_actuator(Sym name, Value v);
    void sort_entries();

    bool operator==(const Interface& o) const { return sensors == o.sensors && actuators == o.actuators; }
    size_t hash() const;
};

struct NetNode {
    Sym name;
    Interface iface;
    Pid proc;
    bool mobile = false;
    LocId loc = 0;

    bool operator==(const NetNode& o) const {
        return name == o.name && iface == o.iface && proc == o.proc && mobile == o.mobile && loc == o.loc;
    }
    size_t hash() const;
};

// Restriction-prenex network: restricted channels out front, then a pool of
// nodes. The empty node list is the empty network 0.
struct Network {
    std::vector<int32_t> restricted;  // universe channel ids
    std::vector<NetNode> nodes;
};

struct Violation {
    enum Kind {
        DuplicateNodeName,
        DuplicateActuator,
        DuplicateNodeDependentSensor,
        UndefinedInterfaceEntry,
        MobileLocationSensor,
        UnknownName,
        ValueOutsideDomain,
        OpenTerm,
        NotTimeGuarded,
    };
    Kind kind;
    std::string detail;
};

std::string violation_to_string(const Violation& v);

// The five well-formedness clauses; empty result means well-formed.
std::vector<Violation> check_well_formed(const Network& net, const ModelUniverse& u);

// Artifact-level validation on top of well-formedness: closed terms,
// time-guarded recursion, names resolved, interface values in domain.
std::vector<Violation> validate_network(const Network& net, const ModelUniverse& u);

// Channels occurring in any process minus the restricted set.
std::vector<int32_t> free_channels(const Network& net);

// Channels mentioned anywhere in the term (universe ids only).
void collect_channels(Pid p, std::vector<int32_t>& out);

}  // namespace iotsem
