#pragma once

#include <string>
#include <vector>

#include "iotsem/lts.hpp"

namespace iotsem {

struct EquivalenceVerdict {
    bool bisimilar = false;
    std::vector<std::string> witness;  // distinguishing label sequence, empty when bisimilar
    size_t states_explored = 0;
    size_t partition_count = 0;
};

// Decides weak bisimilarity over the joint extensional LTS: tau-saturation
// folded into coarsest signature refinement. Time steps, observation actions
// and physical actions are ordinary weak observables. On distinct, the
// refinement history is replayed to extract a short distinguishing sequence.
EquivalenceVerdict weak_bisimilar(const CanonNet& m, const CanonNet& n, const ModelUniverse& u, size_t budget,
                                  const EngineOptions& opts = {}, unsigned workers = 1);
EquivalenceVerdict weak_bisimilar(const Network& m, const Network& n, const ModelUniverse& u, size_t budget);

// The expansion preorder M <= N ("N has at least as many tau-moves"):
// N answers M's tau with one-or-more tau and M answers N's tau with
// zero-or-more, visible actions weakly on both sides.
bool expansion(const CanonNet& m, const CanonNet& n, const ModelUniverse& u, size_t budget);
bool expansion(const Network& m, const Network& n, const ModelUniverse& u, size_t budget);

// --------------------------------------------------------------------------
// Algebraic law suite: bundled instances of the seven laws, each with a
// side-condition-violating counterpart that must come out distinct.
// --------------------------------------------------------------------------

struct LawResult {
    int number;
    std::string description;
    bool positive_pass;
    bool negative_pass;
};

ModelUniverse laws_universe();
std::vector<LawResult> check_algebraic_laws(size_t budget = 200000);

// --------------------------------------------------------------------------
// Distinguishing observers from the completeness construction.
// --------------------------------------------------------------------------

struct UnobservableAction : std::runtime_error {
    explicit UnobservableAction(const std::string& what) : std::runtime_error(what) {}
};

struct ObserverTest {
    NetNode node;
    Sym flag_actuator;
    Value flag_raised;  // barb value signalling the detected action
};

// Builds the single-node stationary test for an Act/Tau, SendObs, RecvObs or
// Sigma action, registering a fresh actuator in `u`. Sensor updates and
// actuator reads have no observer context; they raise UnobservableAction.
ObserverTest build_observer(const Label& action, ModelUniverse& u);

// Appends the observer node to the network (outside interaction with the
// restricted channels is unaffected; the observed channel must be free).
CanonNet compose_observer(const CanonNet& net, const ObserverTest& obs, const ModelUniverse& u);

// Whether the flag barb is reachable; instantaneous_only restricts the
// search to the current time interval.
bool observer_reaches_flag(const CanonNet& composed, const ObserverTest& obs, const ModelUniverse& u,
                           bool instantaneous_only, size_t budget = 1 << 20);

}  // namespace iotsem
