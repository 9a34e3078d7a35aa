#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "iotsem/reduction.hpp"

namespace iotsem {

// Process-level labels of the intensional semantics.
struct ProcessLabel {
    enum Kind : uint8_t { Sigma, Tau, Out, In, AtLoc, SensorRead, ActuatorWrite } kind = Sigma;
    ChanRef chan = 0;
    Value value;
    Sym device = 0;  // sensor / actuator
    LocId loc = 0;   // AtLoc

    bool operator==(const ProcessLabel& o) const {
        return kind == o.kind && chan == o.chan && value == o.value && device == o.device && loc == o.loc;
    }
};

// Network-level and extensional labels share one representation; intensional
// network transitions use Tau/Sigma/Act/Send/Recv, the extensional semantics
// replaces Send/Recv by the observer-located variants and adds the physical
// environment actions.
struct Label {
    enum Kind : uint8_t { Tau, Sigma, Act, Send, Recv, SendObs, RecvObs, SensorEnv, ActuatorEnv } kind = Tau;
    Sym name = 0;  // actuator (Act, ActuatorEnv) or sensor (SensorEnv)
    ChanRef chan = 0;
    Value value;
    LocId loc = 0;

    static Label tau() { return {}; }
    static Label sigma() { return {Sigma, 0, 0, Value{}, 0}; }
    static Label act(Sym a) { return {Act, a, 0, Value{}, 0}; }

    bool operator==(const Label& o) const {
        return kind == o.kind && name == o.name && chan == o.chan && value == o.value && loc == o.loc;
    }
    size_t hash() const;
    std::string to_string(const ModelUniverse& u) const;
};

using ProcStep = std::pair<ProcessLabel, Pid>;
using NetStep = std::pair<Label, CanonNet>;

// Intensional semantics for processes. The state argument resolves
// restricted-channel ranges and domains; receives fan out over the channel's
// message domain, position prefixes over the declared locations.
std::vector<ProcStep> process_transitions(Pid p, const CanonNet& ctx, const ModelUniverse& u,
                                          const EngineOptions& opts = {});

// Intensional semantics for networks.
std::vector<NetStep> network_transitions(const CanonNet& net, const ModelUniverse& u,
                                         const EngineOptions& opts = {});

// Extensional semantics: tau, sigma and actuator changes are inherited;
// sends/receives become observations at every location in range; the
// physical environment updates sensors and reads actuators.
std::vector<NetStep> extensional_transitions(const CanonNet& net, const ModelUniverse& u,
                                             const EngineOptions& opts = {});

enum class LtsMode { Intensional, Extensional };

struct TransitionSystem {
    struct Edge {
        uint32_t src;
        uint32_t label;
        uint32_t dst;
    };

    StateStore store;
    std::vector<uint32_t> initials;
    std::vector<Edge> edges;
    std::vector<Label> labels;

    uint32_t label_id(const Label& l);
    const Label& label(uint32_t id) const { return labels[id]; }
    size_t num_states() const { return store.size(); }

private:
    std::unordered_map<size_t, std::vector<uint32_t>> label_buckets_;
};

// BFS over canonical states with deterministic numbering. `workers` > 1
// computes successor sets for a frontier in parallel; the edge set is
// schedule independent.
TransitionSystem build_lts(const CanonNet& initial, const ModelUniverse& u, LtsMode mode, size_t budget,
                           const EngineOptions& opts = {}, unsigned workers = 1);

// Joint system from several roots (used by the equivalence checker).
TransitionSystem build_lts_multi(const std::vector<CanonNet>& initials, const ModelUniverse& u, LtsMode mode,
                                 size_t budget, const EngineOptions& opts = {}, unsigned workers = 1);

// `states N init I` header followed by one `src <tab> label <tab> dst` row
// per edge.
std::string export_graph(const TransitionSystem& ts, const ModelUniverse& u);
std::string export_dot(const TransitionSystem& ts, const ModelUniverse& u);

}  // namespace iotsem
