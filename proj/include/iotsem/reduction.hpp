#pragma once

#include <string>
#include <vector>

#include "iotsem/congruence.hpp"

namespace iotsem {

// Instantaneous reductions are tau-steps and actuator-change steps; TimeStep
// is the passage of one time unit.
struct ReductionLabel {
    enum Kind : uint8_t { Tau, Act, TimeStep } kind = Tau;
    Sym actuator = 0;

    static ReductionLabel tau() { return {Tau, 0}; }
    static ReductionLabel act(Sym a) { return {Act, a}; }
    static ReductionLabel time() { return {TimeStep, 0}; }

    bool operator==(const ReductionLabel& o) const { return kind == o.kind && actuator == o.actuator; }
    bool instantaneous() const { return kind != TimeStep; }
    std::string to_string() const;
};

// Observable: actuator a at location h currently shows v.
struct Barb {
    Sym actuator;
    LocId loc;
    Value value;

    bool operator==(const Barb& o) const { return actuator == o.actuator && loc == o.loc && value == o.value; }
    bool operator<(const Barb& o) const;
};

// Feature flags for the deliberately broken engine variants used by the
// falsifiability tests. Both default to off.
struct EngineOptions {
    // Reduction engine: generate timed successors per node even when another
    // node pair still has a pending instantaneous communication.
    bool drop_time_negative_premise = false;
    // Transition engine: recursion has no transitions (no lazy unfolding).
    bool drop_fix_unfold = false;
};

using Reduct = std::pair<ReductionLabel, CanonNet>;

// One-step reducts, successors canonicalized and deduplicated. Timed
// successors appear only when no instantaneous reduction exists (unless the
// mutation flag is set); mobile nodes fan out over their reachable locations.
std::vector<Reduct> reductions(const CanonNet& net, const ModelUniverse& u, const EngineOptions& opts = {});

std::vector<Barb> barbs(const CanonNet& net);

// M has the barb after some sequence of tau / timed steps (actuator-change
// steps are deliberately excluded from the search relation).
bool weak_barb(const CanonNet& net, const Barb& b, const ModelUniverse& u, size_t budget = 1 << 20);

// The environment writes v into sensor s at location h.
CanonNet update_sensor(const CanonNet& net, Sym sensor, LocId h, const Value& v, const ModelUniverse& u);

// All states reachable through instantaneous reductions only.
std::vector<CanonNet> instantaneous_closure(const CanonNet& net, const ModelUniverse& u, size_t budget = 1 << 20,
                                            const EngineOptions& opts = {});

// Helpers shared with the transition engine and the bound checker.

// Top-level parallel components of a canonical process (empty for nil).
std::vector<Pid> top_components(Pid p);

// Fully expands a component into basic executable parts (Prefix / Timeout),
// unfolding fix lazily. p is congruent to the parallel composition of the
// result.
const std::vector<Pid>& expand_component(Pid p);

std::string barb_to_string(const Barb& b, const ModelUniverse& u);

}  // namespace iotsem
