#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "iotsem/syntax.hpp"

namespace iotsem {

// A restricted channel in canonical form: slot #i carries the range and
// message domain of the source channel. The source name is kept only for
// display; alpha-equivalent networks agree on range and domain, not names.
struct RestrictedInfo {
    Range range;
    ValueDomain domain;
    Sym source_name = 0;

    bool same(const RestrictedInfo& o) const { return range == o.range && domain == o.domain; }
    size_t hash() const {
        size_t h = static_cast<size_t>(range.v);
        hash_mix(h, domain.hash());
        return h;
    }
};

// Canonical form of a network: restriction-prenex, nodes sorted, parallel
// components flattened and sorted, closed guards resolved, restricted
// channels renamed to slots by first occurrence. fix is never unfolded here.
struct CanonNet {
    std::vector<RestrictedInfo> restricted;
    std::vector<NetNode> nodes;
    size_t hash = 0;

    bool operator==(const CanonNet& o) const;
    void compute_hash();
    std::string hash_hex() const;
};

// Exhaustive application of the structural-congruence axioms that keep the
// form decidable: nil elision, |-flattening and sorting on both levels,
// closed-guard resolution, restriction reordering/garbage collection with
// slot renaming. The fix unfolding axiom is deliberately excluded; the
// transition engines unfold lazily instead.
Pid canon_term(Pid p);

CanonNet canonicalize(const Network& net, const ModelUniverse& u);

// Re-canonicalizes an already slot-based state whose nodes were rewritten by
// a transition step.
CanonNet canonicalize_state(std::vector<RestrictedInfo> restricted, std::vector<NetNode> nodes);

// Sound for full structural congruence; complete for the fragment without
// fix unfolding.
bool congruent(const Network& m, const Network& n, const ModelUniverse& u);

// Range and domain of a channel reference in the context of a state.
Range chan_range(ChanRef c, const CanonNet& state, const ModelUniverse& u);
const ValueDomain& chan_domain(ChanRef c, const CanonNet& state, const ModelUniverse& u);
std::string chan_name(ChanRef c, const CanonNet& state, const ModelUniverse& u);

// Deduplicating store assigning dense ids to canonical states.
class StateStore {
public:
    uint32_t intern(CanonNet s, bool* fresh = nullptr);
    const CanonNet& state(uint32_t id) const { return states_[id]; }
    size_t size() const { return states_.size(); }

private:
    std::vector<CanonNet> states_;
    std::unordered_map<size_t, std::vector<uint32_t>> buckets_;
};

}  // namespace iotsem
