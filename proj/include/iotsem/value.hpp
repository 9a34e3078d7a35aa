#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "iotsem/symbol.hpp"

namespace iotsem {

using LocId = uint32_t;

// Ground values: unit, booleans, integers, named constants (on/off/man/auto)
// and physical locations.
enum class ValueKind : uint8_t { Unit, Bool, Int, Atom, Loc };

struct Value {
    ValueKind kind = ValueKind::Unit;
    int64_t num = 0;  // Bool (0/1) and Int
    Sym atom = 0;     // Atom
    LocId loc = 0;    // Loc

    static Value unit() { return Value{}; }
    static Value boolean(bool b) { return Value{ValueKind::Bool, b ? 1 : 0, 0, 0}; }
    static Value integer(int64_t n) { return Value{ValueKind::Int, n, 0, 0}; }
    static Value make_atom(Sym s) { return Value{ValueKind::Atom, 0, s, 0}; }
    static Value location(LocId l) { return Value{ValueKind::Loc, 0, 0, l}; }

    bool operator==(const Value& o) const {
        if (kind != o.kind) return false;
        switch (kind) {
            case ValueKind::Unit: return true;
            case ValueKind::Bool:
            case ValueKind::Int: return num == o.num;
            case ValueKind::Atom: return atom == o.atom;
            case ValueKind::Loc: return loc == o.loc;
        }
        return false;
    }
    bool operator!=(const Value& o) const { return !(*this == o); }

    size_t hash() const {
        size_t h = static_cast<size_t>(kind);
        switch (kind) {
            case ValueKind::Unit: break;
            case ValueKind::Bool:
            case ValueKind::Int: hash_mix(h, static_cast<size_t>(num)); break;
            case ValueKind::Atom: hash_mix(h, sym_text(atom).size() * 131 + sym_text(atom)[0]); hash_mix(h, std::hash<std::string>{}(sym_text(atom))); break;
            case ValueKind::Loc: hash_mix(h, loc); break;
        }
        return h;
    }
};

// Total order used for canonical sorting; atoms compare by spelling so the
// order is stable across runs.
int value_cmp(const Value& a, const Value& b);

// Finite, duplicate-free, ordered set of admissible values.
struct ValueDomain {
    std::vector<Value> values;

    bool contains(const Value& v) const;
    bool operator==(const ValueDomain& o) const { return values == o.values; }
    size_t hash() const;
};

}  // namespace iotsem
