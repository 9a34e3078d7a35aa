#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "iotsem/value.hpp"

namespace iotsem {

// Channel transmission range: Local is intra-node only, Finite(n) is
// distance-bounded, Infinite reaches everywhere.
struct Range {
    static constexpr int64_t kLocal = -1;
    static constexpr int64_t kInfinite = std::numeric_limits<int64_t>::max();

    int64_t v = kLocal;

    static Range local() { return {kLocal}; }
    static Range finite(int64_t n) { return {n}; }
    static Range infinite() { return {kInfinite}; }

    bool is_local() const { return v == kLocal; }
    bool is_infinite() const { return v == kInfinite; }
    bool operator==(const Range& o) const { return v == o.v; }
};

enum class SensorKind : uint8_t { NodeDependent, LocationDependent };

struct ChannelDecl {
    Sym name;
    Range range;
    ValueDomain domain;  // admissible message payloads
};

struct SensorDecl {
    Sym name;
    SensorKind kind;
    ValueDomain domain;
};

struct ActuatorDecl {
    Sym name;
    ValueDomain domain;
};

// Errors raised while assembling or validating a universe / model.
struct ModelError : std::runtime_error {
    enum Kind { MetricViolation, DanglingName, DomainViolation, ConfigViolation, IllFormed, NotTimeGuarded };
    Kind kind;
    ModelError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
};

struct BudgetExceeded : std::runtime_error {
    size_t states_seen;
    size_t frontier_size;
    BudgetExceeded(size_t seen, size_t frontier)
        : std::runtime_error("state space budget exceeded after " + std::to_string(seen) + " states (frontier " +
                             std::to_string(frontier) + ")"),
          states_seen(seen),
          frontier_size(frontier) {}
};

// Every global finite structure the semantics ranges over: the location set
// with its distance metric, channel ranges and message domains, sensor and
// actuator domains, and the per-time-unit mobility bound delta.
//
// Immutable after finalize(); safe to share across concurrent explorers.
class ModelUniverse {
public:
    std::vector<Sym> locations;               // LocId = index
    std::vector<std::vector<int64_t>> dist;   // symmetric, zero diagonal, -1 = undeclared
    std::vector<ChannelDecl> channels;        // ChanId (>= 0) = index
    std::vector<SensorDecl> sensors;
    std::vector<ActuatorDecl> actuators;
    uint32_t delta = 0;

    LocId add_location(Sym name);
    void set_distance(LocId a, LocId b, int64_t d);
    int32_t add_channel(Sym name, Range r, ValueDomain dom);
    void add_sensor(Sym name, SensorKind kind, ValueDomain dom);
    void add_actuator(Sym name, ValueDomain dom);

    // Checks the metric laws (zero diagonal, symmetry, triangle inequality)
    // and completeness of every table. Throws ModelError on violation.
    void finalize();

    std::optional<LocId> find_location(Sym name) const;
    std::optional<int32_t> find_channel(Sym name) const;
    const SensorDecl* find_sensor(Sym name) const;
    const ActuatorDecl* find_actuator(Sym name) const;

    int64_t distance(LocId a, LocId b) const { return dist[a][b]; }

    // d(h,k) <= rng(c), for a universe channel.
    bool in_range(int32_t chan, LocId h, LocId k) const { return in_range(channels[chan].range, h, k); }
    bool in_range(Range r, LocId h, LocId k) const {
        if (r.is_local()) return false;
        if (r.is_infinite()) return true;
        return distance(h, k) <= r.v;
    }

    // { k | d(h,k) <= bound }; always contains h.
    std::vector<LocId> reachable_locations(LocId h, uint32_t bound) const;

    bool same_declarations(const ModelUniverse& o) const;

    std::string loc_name(LocId l) const { return sym_text(locations[l]); }

private:
    bool finalized_ = false;
};

std::string value_to_string(const Value& v, const ModelUniverse& u);

}  // namespace iotsem
