#pragma once

#include <string>

#include "iotsem/congruence.hpp"

namespace iotsem {

// Deterministic renderers over canonical forms; print_model emits a complete
// reparseable model file (universe declarations plus the system block).
std::string pretty_process(Pid p, const ModelUniverse& u, const CanonNet* ctx = nullptr);
std::string pretty_network(const CanonNet& net, const ModelUniverse& u);
std::string print_model(const CanonNet& net, const ModelUniverse& u);

}  // namespace iotsem
