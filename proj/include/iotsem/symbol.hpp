#pragma once

#include <cstdint>
#include <deque>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>

namespace iotsem {

// Interned identifier. Comparisons that must be stable across runs
// (canonical sorting) go through the string, not the id.
using Sym = uint32_t;

class SymbolTable {
public:
    static SymbolTable& instance();

    Sym intern(std::string_view text);
    const std::string& text(Sym s) const;

private:
    mutable std::mutex mtx_;
    std::deque<std::string> strings_;
    std::unordered_map<std::string_view, Sym> index_;
};

inline Sym sym(std::string_view text) { return SymbolTable::instance().intern(text); }
inline const std::string& sym_text(Sym s) { return SymbolTable::instance().text(s); }

inline int sym_cmp(Sym a, Sym b) {
    if (a == b) return 0;
    return sym_text(a).compare(sym_text(b)) < 0 ? -1 : 1;
}

inline void hash_mix(size_t& seed, size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2);
}

}  // namespace iotsem
