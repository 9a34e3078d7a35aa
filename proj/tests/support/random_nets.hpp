#pragma once

#include <random>

#include "iotsem/congruence.hpp"

namespace iotsem::testsupport {

// Deterministic generator of small well-formed, closed, time-guarded
// networks over a fixed three-location universe. Used by the bound,
// round-trip and equivalence property suites.
class NetGen {
public:
    explicit NetGen(uint64_t seed);

    const ModelUniverse& universe() const { return u_; }
    Network generate(int max_nodes = 3, int max_depth = 6);

private:
    struct Ctx {
        std::vector<Sym> sensors;    // readable by this node
        std::vector<Sym> actuators;  // writable by this node
        std::vector<Sym> value_vars;
        int fix_depth = 0;
        int guard_floor = 0;  // fix binders below this depth are time-guarded
    };

    Pid gen_proc(int depth, Ctx& ctx);
    ValueExpr gen_payload(int32_t chan, const Ctx& ctx);
    Value pick_bit();

    std::mt19937_64 rng_;
    ModelUniverse u_;
    std::vector<int32_t> channels_;
    Sym node_sensor_, loc_sensor_;
    std::vector<Sym> actuators_;

    int rnd(int n) { return static_cast<int>(rng_() % static_cast<uint64_t>(n)); }
};

}  // namespace iotsem::testsupport
