#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "iotsem/equivalence.hpp"
#include "iotsem/meta.hpp"
#include "iotsem/models.hpp"
#include "iotsem/parser.hpp"
#include "iotsem/printer.hpp"

using namespace iotsem;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ParsedModel load(const std::string& path) { return parse_model(slurp(path)); }

int cmd_check(const std::string& path) {
    ParsedModel m = load(path);
    auto violations = validate_network(m.network, m.universe);
    if (violations.empty()) {
        std::cout << "ok: well-formed (" << m.network.nodes.size() << " nodes, " << m.network.restricted.size()
                  << " restricted channels)\n";
        return kExitPass;
    }
    for (auto& v : violations) std::cout << violation_to_string(v) << "\n";
    return kExitFailure;
}

int cmd_reduce(const std::string& path, int steps, bool trace, bool interactive) {
    ParsedModel m = load(path);
    CanonNet state = canonicalize(m.network, m.universe);
    for (int step = 0; step < steps; ++step) {
        auto succs = reductions(state, m.universe);
        std::vector<std::pair<std::string, CanonNet>> choices;
        for (auto& [label, succ] : succs) choices.emplace_back(label.to_string(), succ);
        if (interactive) {
            // sensor updates are environment moves; offer them alongside
            for (const SensorDecl& s : m.universe.sensors)
                for (LocId h = 0; h < m.universe.locations.size(); ++h)
                    for (const Value& v : s.domain.values) {
                        CanonNet updated = update_sensor(state, s.name, h, v, m.universe);
                        if (!(updated == state))
                            choices.emplace_back("update " + sym_text(s.name) + "@" + m.universe.loc_name(h) + " to " +
                                                     value_to_string(v, m.universe),
                                                 updated);
                    }
        }
        if (choices.empty()) {
            std::cout << "no reduction from this state\n";
            break;
        }
        size_t pick = 0;
        if (interactive) {
            std::cout << "state " << state.hash_hex() << ":\n" << pretty_network(state, m.universe) << "\n";
            for (size_t i = 0; i < choices.size(); ++i) std::cout << "  [" << i << "] " << choices[i].first << "\n";
            std::cout << "choice> " << std::flush;
            std::string line;
            if (!std::getline(std::cin, line)) break;
            try {
                pick = std::stoul(line);
            } catch (...) {
                pick = 0;
            }
            if (pick >= choices.size()) {
                std::cout << "no such choice\n";
                continue;
            }
        }
        state = choices[pick].second;
        if (trace || interactive) std::cout << choices[pick].first << " :: " << state.hash_hex() << "\n";
    }
    if (!interactive) {
        std::cout << pretty_network(state, m.universe) << "\n";
        std::cout << "barbs:";
        for (auto& b : barbs(state)) std::cout << " " << barb_to_string(b, m.universe);
        std::cout << "\n";
    }
    return kExitPass;
}

int cmd_lts(const std::string& path, const std::string& mode, const std::string& export_fmt, size_t budget) {
    ParsedModel m = load(path);
    LtsMode lm = mode == "extensional" ? LtsMode::Extensional : LtsMode::Intensional;
    TransitionSystem ts = build_lts(canonicalize(m.network, m.universe), m.universe, lm, budget);
    if (export_fmt == "dot")
        std::cout << export_dot(ts, m.universe);
    else if (export_fmt == "graph")
        std::cout << export_graph(ts, m.universe);
    else
        std::cout << "states " << ts.num_states() << " edges " << ts.edges.size() << "\n";
    return kExitPass;
}

int verdict_out(const EquivalenceVerdict& v, const std::string& format) {
    if (format == "machine") {
        std::cout << "verdict " << (v.bisimilar ? "bisimilar" : "distinct") << "\n";
        std::cout << "states " << v.states_explored << "\n";
        std::cout << "blocks " << v.partition_count << "\n";
        for (auto& w : v.witness) std::cout << "witness " << w << "\n";
    } else {
        std::cout << (v.bisimilar ? "bisimilar" : "distinct") << " (" << v.states_explored << " joint states, "
                  << v.partition_count << " blocks)\n";
        if (!v.bisimilar) {
            std::cout << "distinguishing sequence:";
            for (auto& w : v.witness) std::cout << " " << w;
            std::cout << "\n";
        }
    }
    return v.bisimilar ? kExitPass : kExitFailure;
}

int cmd_bisim(const std::string& a, const std::string& b, size_t budget, const std::string& format) {
    ParsedModel ma = load(a), mb = load(b);
    if (!ma.universe.same_declarations(mb.universe)) {
        std::cerr << "error: the two models declare different universes\n";
        return kExitUsage;
    }
    return verdict_out(weak_bisimilar(ma.network, mb.network, ma.universe, budget), format);
}

int cmd_expand(const std::string& a, const std::string& b, size_t budget) {
    ParsedModel ma = load(a), mb = load(b);
    if (!ma.universe.same_declarations(mb.universe)) {
        std::cerr << "error: the two models declare different universes\n";
        return kExitUsage;
    }
    bool ok = expansion(ma.network, mb.network, ma.universe, budget);
    std::cout << (ok ? "expansion holds" : "expansion fails") << "\n";
    return ok ? kExitPass : kExitFailure;
}

int cmd_props(const std::string& path, bool harmony, bool time, bool bound, size_t budget) {
    ParsedModel m = load(path);
    CanonNet init = canonicalize(m.network, m.universe);
    if (!harmony && !time && !bound) harmony = time = bound = true;

    bool all_pass = true;
    if (time) {
        for (auto& r : check_time_properties(init, m.universe, budget)) {
            std::cout << report_to_string(r) << "\n";
            all_pass = all_pass && r.passed();
        }
    }
    if (harmony) {
        auto r = check_harmony(init, m.universe, budget);
        std::cout << report_to_string(r) << "\n";
        all_pass = all_pass && r.passed();
    }
    if (bound) {
        std::cout << "rd-bound: " << rd_bound(init) << " (longest instantaneous chain "
                  << longest_instantaneous_chain(init, m.universe, budget) << ")\n";
    }
    return all_pass ? kExitPass : kExitFailure;
}

int cmd_laws(size_t budget) {
    bool all = true;
    for (auto& r : check_algebraic_laws(budget)) {
        std::cout << "law " << r.number << " (" << r.description << "): " << (r.positive_pass ? "holds" : "FAILS")
                  << ", violated side condition " << (r.negative_pass ? "distinct" : "NOT DETECTED") << "\n";
        all = all && r.positive_pass && r.negative_pass;
    }
    return all ? kExitPass : kExitFailure;
}

int cmd_smart_home(const std::string& variant, const std::string& check, int64_t theta, uint32_t delta, size_t budget,
                   bool skip_full) {
    ScenarioConfig cfg;
    cfg.theta = theta;
    cfg.delta = delta;
    cfg.variant = variant == "gps" ? HomeVariant::Gps : HomeVariant::Proximity;

    if (check == "props") {
        bool all = true;
        for (auto& r : check_runtime_properties(cfg.variant, cfg, budget)) {
            std::cout << report_to_string(r) << "\n";
            all = all && r.passed();
        }
        return all ? kExitPass : kExitFailure;
    }
    if (check == "equiv") {
        auto result = check_system_equality(cfg, budget, !skip_full);
        std::cout << "light subsystems: ";
        int rc = verdict_out(result.light_subsystem, "text");
        if (result.full_system_checked) {
            std::cout << "full systems: ";
            rc = std::max(rc, verdict_out(result.full_system, "text"));
        }
        return rc;
    }
    std::cerr << "unknown check '" << check << "'\n";
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semantics toolkit for timed IoT networks: reduction runs, transition systems, weak bisimilarity"};
    app.require_subcommand(1);

    std::string file, file_b, mode = "intensional", export_fmt, format = "text", variant = "proximity",
                      home_check = "props";
    int steps = 32;
    bool trace = false, interactive = false, harmony = false, time_props = false, bound = false, skip_full = false;
    size_t budget = 200000;
    int64_t theta = 20;
    uint32_t delta = 1;

    auto* check = app.add_subcommand("check", "parse a model and verify well-formedness");
    check->add_option("file", file)->required();

    auto* reduce = app.add_subcommand("reduce", "run the reduction semantics");
    reduce->add_option("file", file)->required();
    reduce->add_option("--steps", steps);
    reduce->add_flag("--trace", trace);
    reduce->add_flag("--interactive", interactive);

    auto* lts = app.add_subcommand("lts", "build a labelled transition system");
    lts->add_option("file", file)->required();
    lts->add_option("--mode", mode)->check(CLI::IsMember({"intensional", "extensional"}));
    lts->add_option("--export", export_fmt)->check(CLI::IsMember({"graph", "dot"}));
    lts->add_option("--budget", budget);

    auto* bisim = app.add_subcommand("bisim", "decide weak bisimilarity of two models");
    bisim->add_option("fileA", file)->required();
    bisim->add_option("fileB", file_b)->required();
    bisim->add_option("--budget", budget);
    bisim->add_option("--format", format)->check(CLI::IsMember({"text", "machine"}));

    auto* expand = app.add_subcommand("expand", "decide the expansion preorder (A expanded by B)");
    expand->add_option("fileA", file)->required();
    expand->add_option("fileB", file_b)->required();
    expand->add_option("--budget", budget);

    auto* props = app.add_subcommand("props", "check meta-properties on the reachable states");
    props->add_option("file", file)->required();
    props->add_flag("--harmony", harmony);
    props->add_flag("--time", time_props);
    props->add_flag("--bound", bound);
    props->add_option("--budget", budget);

    auto* laws = app.add_subcommand("laws", "verify the bundled algebraic law instances");
    laws->add_option("--budget", budget);

    auto* home = app.add_subcommand("smart-home", "run the bundled smart-home case study");
    home->add_option("--variant", variant)->check(CLI::IsMember({"proximity", "gps"}));
    home->add_option("--check", home_check)->check(CLI::IsMember({"props", "equiv"}));
    home->add_option("--theta", theta);
    home->add_option("--delta", delta);
    home->add_option("--budget", budget);
    home->add_flag("--light-only", skip_full, "skip the full-system equivalence check");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*check) return cmd_check(file);
        if (*reduce) return cmd_reduce(file, steps, trace, interactive);
        if (*lts) return cmd_lts(file, mode, export_fmt, budget);
        if (*bisim) return cmd_bisim(file, file_b, budget, format);
        if (*expand) return cmd_expand(file, file_b, budget);
        if (*props) return cmd_props(file, harmony, time_props, bound, budget);
        if (*laws) return cmd_laws(budget);
        if (*home) return cmd_smart_home(variant, home_check, theta, delta, budget, skip_full);
    } catch (const BudgetExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
