#pragma once

#include <optional>
#include <string>
#include <vector>

#include "iotsem/lts.hpp"

namespace iotsem {

struct Counterexample {
    std::string state;  // canonical hash of the offending state
    std::string explanation;
};

struct PropertyReport {
    std::string property;
    size_t states_checked = 0;
    std::vector<Counterexample> counterexamples;

    bool passed() const { return counterexamples.empty(); }
};

// Upper bound on the untimed prefixes of a process that can fire within one
// time interval; nullopt is infinity (an unguarded process variable).
std::optional<uint64_t> pfx_bound(Pid p);

// Upper bound on consecutive instantaneous reductions of a network: the sum
// of the per-node process bounds, invariant under restriction. Throws
// NotTimeGuarded when unbounded.
uint64_t rd_bound(const CanonNet& net);
uint64_t rd_bound(const Network& net, const ModelUniverse& u);

// On every reachable state: (a) maximal progress, (b) patience, (c) local
// time determinism with per-node location drift <= 2*delta, (d) every
// maximal instantaneous chain within the rd bound. One report per property.
std::vector<PropertyReport> check_time_properties(const CanonNet& net, const ModelUniverse& u, size_t budget,
                                                  const EngineOptions& opts = {});

// On every reachable state, the (label, canonical successor) sets of the
// reduction semantics and of the intensional transition semantics coincide
// for tau, actuator changes and time steps.
PropertyReport check_harmony(const CanonNet& net, const ModelUniverse& u, size_t budget,
                             const EngineOptions& opts = {});

// Exact length of the longest instantaneous chain from `net`; used as the
// brute-force oracle against rd_bound. Throws if the closure exceeds the
// budget or an instantaneous cycle is found.
uint64_t longest_instantaneous_chain(const CanonNet& net, const ModelUniverse& u, size_t budget = 1 << 16);

std::string report_to_string(const PropertyReport& r);

}  // namespace iotsem
