#include "iotsem/universe.hpp"

#include <algorithm>

namespace iotsem {

SymbolTable& SymbolTable::instance() {
    static SymbolTable table;
    return table;
}

Sym SymbolTable::intern(std::string_view text) {
    std::lock_guard<std::mutex> lock(mtx_);
    auto it = index_.find(text);
    if (it != index_.end()) return it->second;
    strings_.emplace_back(text);
    Sym id = static_cast<Sym>(strings_.size() - 1);
    index_.emplace(strings_.back(), id);
    return id;
}

const std::string& SymbolTable::text(Sym s) const {
    std::lock_guard<std::mutex> lock(mtx_);
    return strings_[s];
}

int value_cmp(const Value& a, const Value& b) {
    if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
    switch (a.kind) {
        case ValueKind::Unit: return 0;
        case ValueKind::Bool:
        case ValueKind::Int: return a.num < b.num ? -1 : (a.num > b.num ? 1 : 0);
        case ValueKind::Atom: return sym_cmp(a.atom, b.atom);
        case ValueKind::Loc: return a.loc < b.loc ? -1 : (a.loc > b.loc ? 1 : 0);
    }
    return 0;
}

bool ValueDomain::contains(const Value& v) const {
    return std::find(values.begin(), values.end(), v) != values.end();
}

size_t ValueDomain::hash() const {
    size_t h = values.size();
    for (const auto& v : values) hash_mix(h, v.hash());
    return h;
}

LocId ModelUniverse::add_location(Sym name) {
    for (Sym l : locations)
        if (l == name) throw ModelError(ModelError::DanglingName, "duplicate location " + sym_text(name));
    locations.push_back(name);
    for (auto& row : dist) row.push_back(-1);
    dist.emplace_back(locations.size(), -1);
    dist.back().back() = 0;
    LocId id = static_cast<LocId>(locations.size() - 1);
    dist[id][id] = 0;
    return id;
}

void ModelUniverse::set_distance(LocId a, LocId b, int64_t d) {
    if (a == b && d != 0)
        throw ModelError(ModelError::MetricViolation, "d(h,h) must be 0 at " + loc_name(a));
    if (d < 0) throw ModelError(ModelError::MetricViolation, "negative distance");
    if (dist[a][b] >= 0 && dist[a][b] != d)
        throw ModelError(ModelError::MetricViolation,
                         "conflicting distance between " + loc_name(a) + " and " + loc_name(b));
    dist[a][b] = d;
    if (dist[b][a] >= 0 && dist[b][a] != d)
        throw ModelError(ModelError::MetricViolation,
                         "asymmetric distance between " + loc_name(a) + " and " + loc_name(b));
    dist[b][a] = d;
}

int32_t ModelUniverse::add_channel(Sym name, Range r, ValueDomain dom) {
    if (find_channel(name)) throw ModelError(ModelError::DanglingName, "duplicate channel " + sym_text(name));
    if (dom.values.empty()) throw ModelError(ModelError::DomainViolation, "empty domain for channel " + sym_text(name));
    channels.push_back({name, r, std::move(dom)});
    return static_cast<int32_t>(channels.size() - 1);
}

void ModelUniverse::add_sensor(Sym name, SensorKind kind, ValueDomain dom) {
    if (find_sensor(name)) throw ModelError(ModelError::DanglingName, "duplicate sensor " + sym_text(name));
    if (dom.values.empty()) throw ModelError(ModelError::DomainViolation, "empty domain for sensor " + sym_text(name));
    sensors.push_back({name, kind, std::move(dom)});
}

void ModelUniverse::add_actuator(Sym name, ValueDomain dom) {
    if (find_actuator(name)) throw ModelError(ModelError::DanglingName, "duplicate actuator " + sym_text(name));
    if (dom.values.empty())
        throw ModelError(ModelError::DomainViolation, "empty domain for actuator " + sym_text(name));
    actuators.push_back({name, std::move(dom)});
}

void ModelUniverse::finalize() {
    const size_t n = locations.size();
    for (size_t i = 0; i < n; ++i) {
        if (dist[i][i] != 0) throw ModelError(ModelError::MetricViolation, "nonzero diagonal at " + loc_name(i));
        for (size_t j = 0; j < n; ++j) {
            if (dist[i][j] < 0)
                throw ModelError(ModelError::MetricViolation,
                                 "missing distance between " + loc_name(i) + " and " + loc_name(j));
            if (dist[i][j] != dist[j][i])
                throw ModelError(ModelError::MetricViolation,
                                 "asymmetric distance between " + loc_name(i) + " and " + loc_name(j));
        }
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            for (size_t k = 0; k < n; ++k)
                if (dist[i][j] > dist[i][k] + dist[k][j])
                    throw ModelError(ModelError::MetricViolation,
                                     "triangle inequality fails: d(" + loc_name(i) + "," + loc_name(j) + ") > d(" +
                                         loc_name(i) + "," + loc_name(k) + ") + d(" + loc_name(k) + "," + loc_name(j) +
                                         ")");
    for (auto& s : sensors)
        for (auto& a : actuators)
            if (s.name == a.name)
                throw ModelError(ModelError::DanglingName, "name used as both sensor and actuator: " + sym_text(s.name));
    finalized_ = true;
}

std::optional<LocId> ModelUniverse::find_location(Sym name) const {
    for (size_t i = 0; i < locations.size(); ++i)
        if (locations[i] == name) return static_cast<LocId>(i);
    return std::nullopt;
}

std::optional<int32_t> ModelUniverse::find_channel(Sym name) const {
    for (size_t i = 0; i < channels.size(); ++i)
        if (channels[i].name == name) return static_cast<int32_t>(i);
    return std::nullopt;
}

const SensorDecl* ModelUniverse::find_sensor(Sym name) const {
    for (auto& s : sensors)
        if (s.name == name) return &s;
    return nullptr;
}

const ActuatorDecl* ModelUniverse::find_actuator(Sym name) const {
    for (auto& a : actuators)
        if (a.name == name) return &a;
    return nullptr;
}

std::vector<LocId> ModelUniverse::reachable_locations(LocId h, uint32_t bound) const {
    std::vector<LocId> out;
    for (LocId k = 0; k < locations.size(); ++k)
        if (distance(h, k) <= static_cast<int64_t>(bound)) out.push_back(k);
    return out;
}

bool ModelUniverse::same_declarations(const ModelUniverse& o) const {
    if (locations != o.locations || dist != o.dist || delta != o.delta) return false;
    if (channels.size() != o.channels.size() || sensors.size() != o.sensors.size() ||
        actuators.size() != o.actuators.size())
        return false;
    for (size_t i = 0; i < channels.size(); ++i) {
        if (channels[i].name != o.channels[i].name || !(channels[i].range == o.channels[i].range) ||
            !(channels[i].domain == o.channels[i].domain))
            return false;
    }
    for (size_t i = 0; i < sensors.size(); ++i) {
        if (sensors[i].name != o.sensors[i].name || sensors[i].kind != o.sensors[i].kind ||
            !(sensors[i].domain == o.sensors[i].domain))
            return false;
    }
    for (size_t i = 0; i < actuators.size(); ++i) {
        if (actuators[i].name != o.actuators[i].name || !(actuators[i].domain == o.actuators[i].domain)) return false;
    }
    return true;
}

std::string value_to_string(const Value& v, const ModelUniverse& u) {
    switch (v.kind) {
        case ValueKind::Unit: return "<>";
        case ValueKind::Bool: return v.num ? "true" : "false";
        case ValueKind::Int: return std::to_string(v.num);
        case ValueKind::Atom: return sym_text(v.atom);
        case ValueKind::Loc: return u.loc_name(v.loc);
    }
    return "?";
}

}  // namespace iotsem
