#pragma once

#include <vector>

#include "iotsem/equivalence.hpp"
#include "iotsem/meta.hpp"

namespace iotsem {

enum class HomeVariant { Proximity, Gps };

// Configuration of the smart-home case study. The threshold and temperature
// domain are parameters; boiler and lights start off, the phone mode starts
// automatic, the temperature starts at the threshold.
struct ScenarioConfig {
    HomeVariant variant = HomeVariant::Proximity;
    int64_t theta = 20;
    std::vector<int64_t> temperatures = {15, 20, 25};
    uint32_t delta = 1;
};

// The shared universe: four contiguous room locations plus one outside
// location, the Internet channel, the per-variant short-range channels, the
// GPS channel, and the sensor/actuator domains.
ModelUniverse smart_home_universe(const ScenarioConfig& cfg);

// The full system of the selected variant with its channels restricted.
Network build_smart_home(const ScenarioConfig& cfg, const ModelUniverse& u);

// The light subsystems used by the equality proof's decomposition: the phone
// stripped to its light controller, the two light managers, and (gps) the
// centralised manager.
Network build_light_subsystem(HomeVariant variant, const ScenarioConfig& cfg, const ModelUniverse& u);

// The four run-time properties, each over every stable derivative:
//   1. after [mode -> man], every settled state shows the boiler on;
//   2. after [temp -> t] with t below the threshold, boiler on;
//   3. after [temp -> t] with t at or above the threshold, boiler off;
//   4. the two room lights are never on together.
std::vector<PropertyReport> check_runtime_properties(HomeVariant variant, const ScenarioConfig& cfg, size_t budget,
                                                     int64_t mutated_c1_range = -2);

struct SystemEqualityResult {
    EquivalenceVerdict light_subsystem;
    EquivalenceVerdict full_system;
    bool full_system_checked = false;
};

// Checks the proof decomposition (light subsystems bisimilar) and, when
// check_full is set, the complete systems.
SystemEqualityResult check_system_equality(const ScenarioConfig& cfg, size_t budget, bool check_full = true);

}  // namespace iotsem
