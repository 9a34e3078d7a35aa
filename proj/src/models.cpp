#include "iotsem/models.hpp"

#include <algorithm>

namespace iotsem {

namespace {

struct HomeNames {
    LocId loc1, loc2, loc3, loc4, out;
    int32_t b, c1, c2, gc1, gc2, g;
    Sym mode, temp, boiler, light1, light2;
    Sym nP, n1, n2, nB, nLM;
    Value man, aut, on, off;

    explicit HomeNames(const ModelUniverse& u) {
        loc1 = *u.find_location(sym("loc1"));
        loc2 = *u.find_location(sym("loc2"));
        loc3 = *u.find_location(sym("loc3"));
        loc4 = *u.find_location(sym("loc4"));
        out = *u.find_location(sym("out"));
        b = *u.find_channel(sym("b"));
        c1 = *u.find_channel(sym("c1"));
        c2 = *u.find_channel(sym("c2"));
        gc1 = *u.find_channel(sym("gc1"));
        gc2 = *u.find_channel(sym("gc2"));
        g = *u.find_channel(sym("g"));
        mode = sym("mode");
        temp = sym("temp");
        boiler = sym("boiler");
        light1 = sym("light1");
        light2 = sym("light2");
        nP = sym("nP");
        n1 = sym("n1");
        n2 = sym("n2");
        nB = sym("nB");
        nLM = sym("nLM");
        man = Value::make_atom(sym("man"));
        aut = Value::make_atom(sym("auto"));
        on = Value::make_atom(sym("on"));
        off = Value::make_atom(sym("off"));
    }
};

ValueExpr val(Value v) { return ValueExpr::value(v); }
ValueExpr var(const char* x) { return ValueExpr::variable(sym(x)); }

// fix X. timeout(c!<>. sigma.X, X)
Pid beacon(int32_t c) {
    return p_fix(p_timeout_send(c, val(Value::unit()), p_sleep(p_var(0)), p_var(0)));
}

Pid boiler_ctrl(const HomeNames& h) {
    return p_fix(p_read(sym("z"), h.mode, p_timeout_send(h.b, var("z"), p_sleep(p_var(0)), p_var(0))));
}

Pid light_ctrl(int32_t cA, int32_t cB) { return p_par(beacon(cA), beacon(cB)); }

// fix X. @(x). timeout(g!<x>. sigma.X, X)
Pid light_ctrl_gps(const HomeNames& h) {
    return p_fix(p_getpos(sym("x"), p_timeout_send(h.g, var("x"), p_sleep(p_var(0)), p_var(0))));
}

// fix X. timeout(c?(u). light!on. sigma.X, light!off. X)
Pid light_mgr(int32_t c, Sym light, const HomeNames& h) {
    return p_fix(p_timeout_recv(c, sym("u"), p_write(val(h.on), light, p_sleep(p_var(0))),
                                p_write(val(h.off), light, p_var(0))));
}

Pid temp_ctrl(const HomeNames& h, int64_t theta) {
    BExprPtr cold = BoolExpr::lt(var("t"), val(Value::integer(theta)));
    return p_read(sym("t"), h.temp,
                  p_cond(cold, p_write(val(h.on), h.boiler, p_sleep(p_var(0))),
                         p_write(val(h.off), h.boiler, p_sleep(p_var(0)))));
}

Pid auto_mode(const HomeNames& h, int64_t theta) {
    // manual loop: fix Y. b?(y). ([y=auto] X ; sigma.Y); the bare receive
    // prefix desugars to a timeout recursion of its own
    Pid manual = p_fix(p_recv_prefix(
        h.b, sym("y"), p_cond(BoolExpr::eq(var("y"), val(h.aut)), p_var(1), p_sleep(p_var(0)))));
    Pid tc = temp_ctrl(h, theta);
    return p_fix(p_timeout_recv(h.b, sym("x"),
                                p_cond(BoolExpr::eq(var("x"), val(h.man)),
                                       p_write(val(h.on), h.boiler, p_sleep(manual)), tc),
                                tc));
}

// fix X. timeout(g?(y). [y=loc1] timeout(gc1!<>. sigma.X, X)
//                       ; [y=loc4] timeout(gc2!<>. sigma.X, X) ; sigma.X, X)
Pid central_light_mgr(const HomeNames& h) {
    Pid x0 = p_var(0);
    Pid room1 = p_timeout_send(h.gc1, val(Value::unit()), p_sleep(x0), x0);
    Pid room2 = p_timeout_send(h.gc2, val(Value::unit()), p_sleep(x0), x0);
    Pid body = p_cond(BoolExpr::eq(var("y"), val(Value::location(h.loc1))), room1,
                      p_cond(BoolExpr::eq(var("y"), val(Value::location(h.loc4))), room2, p_sleep(x0)));
    return p_fix(p_timeout_recv(h.g, sym("y"), body, x0));
}

NetNode phone_node(const HomeNames& h, Pid proc) {
    Interface iface;
    iface.set_sensor(h.mode, h.aut);
    return {h.nP, std::move(iface), proc, true, h.out};
}

NetNode light_node(const HomeNames& h, int j, int32_t chan) {
    Interface iface;
    Sym light = j == 1 ? h.light1 : h.light2;
    iface.set_actuator(light, h.off);
    return {j == 1 ? h.n1 : h.n2, std::move(iface), light_mgr(chan, light, h), false, j == 1 ? h.loc1 : h.loc4};
}

NetNode boiler_node(const HomeNames& h, const ScenarioConfig& cfg) {
    Interface iface;
    iface.set_sensor(h.temp, Value::integer(cfg.theta));
    iface.set_actuator(h.boiler, h.off);
    return {h.nB, std::move(iface), auto_mode(h, cfg.theta), false, h.loc2};
}

}  // namespace

ModelUniverse smart_home_universe(const ScenarioConfig& cfg) {
    if (std::find(cfg.temperatures.begin(), cfg.temperatures.end(), cfg.theta) == cfg.temperatures.end())
        throw ModelError(ModelError::ConfigViolation, "threshold outside the temperature domain");

    ModelUniverse u;
    LocId loc1 = u.add_location(sym("loc1"));
    LocId loc2 = u.add_location(sym("loc2"));
    LocId loc3 = u.add_location(sym("loc3"));
    LocId loc4 = u.add_location(sym("loc4"));
    LocId out = u.add_location(sym("out"));
    LocId rooms[4] = {loc1, loc2, loc3, loc4};
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) u.set_distance(rooms[i], rooms[j], j - i);
    // the single outside location, at the least distance the entrance-only
    // access permits: d(out, loc_i) = i
    for (int i = 0; i < 4; ++i) u.set_distance(out, rooms[i], i + 1);
    u.delta = cfg.delta;

    ValueDomain unit_dom{{Value::unit()}};
    ValueDomain mode_dom{{Value::make_atom(sym("man")), Value::make_atom(sym("auto"))}};
    ValueDomain onoff{{Value::make_atom(sym("on")), Value::make_atom(sym("off"))}};
    ValueDomain temps;
    for (int64_t t : cfg.temperatures) temps.values.push_back(Value::integer(t));
    ValueDomain locs;
    for (LocId l = 0; l < 5; ++l) locs.values.push_back(Value::location(l));

    u.add_channel(sym("b"), Range::infinite(), mode_dom);
    u.add_channel(sym("c1"), Range::finite(0), unit_dom);
    u.add_channel(sym("c2"), Range::finite(0), unit_dom);
    u.add_channel(sym("gc1"), Range::finite(2), unit_dom);
    u.add_channel(sym("gc2"), Range::finite(1), unit_dom);
    u.add_channel(sym("g"), Range::infinite(), locs);

    u.add_sensor(sym("mode"), SensorKind::NodeDependent, mode_dom);
    u.add_sensor(sym("temp"), SensorKind::LocationDependent, temps);
    u.add_actuator(sym("boiler"), onoff);
    u.add_actuator(sym("light1"), onoff);
    u.add_actuator(sym("light2"), onoff);
    u.finalize();
    return u;
}

Network build_smart_home(const ScenarioConfig& cfg, const ModelUniverse& u) {
    HomeNames h(u);
    Network net;
    bool gps = cfg.variant == HomeVariant::Gps;
    int32_t cA = gps ? h.gc1 : h.c1;
    int32_t cB = gps ? h.gc2 : h.c2;

    net.restricted = {cA, cB};
    if (gps) net.restricted.push_back(h.g);

    Pid phone_proc = p_par(boiler_ctrl(h), gps ? light_ctrl_gps(h) : light_ctrl(cA, cB));
    net.nodes.push_back(phone_node(h, phone_proc));
    net.nodes.push_back(light_node(h, 1, cA));
    net.nodes.push_back(light_node(h, 2, cB));
    net.nodes.push_back(boiler_node(h, cfg));
    if (gps) net.nodes.push_back({h.nLM, Interface{}, central_light_mgr(h), false, h.loc3});
    return net;
}

Network build_light_subsystem(HomeVariant variant, const ScenarioConfig& cfg, const ModelUniverse& u) {
    (void)cfg;
    HomeNames h(u);
    Network net;
    bool gps = variant == HomeVariant::Gps;
    int32_t cA = gps ? h.gc1 : h.c1;
    int32_t cB = gps ? h.gc2 : h.c2;

    net.restricted = {cA, cB};
    if (gps) net.restricted.push_back(h.g);
    net.nodes.push_back(phone_node(h, gps ? light_ctrl_gps(h) : light_ctrl(cA, cB)));
    net.nodes.push_back(light_node(h, 1, cA));
    net.nodes.push_back(light_node(h, 2, cB));
    if (gps) net.nodes.push_back({h.nLM, Interface{}, central_light_mgr(h), false, h.loc3});
    return net;
}

std::vector<PropertyReport> check_runtime_properties(HomeVariant variant, const ScenarioConfig& cfg, size_t budget,
                                                     int64_t mutated_c1_range) {
    ScenarioConfig c = cfg;
    c.variant = variant;
    ModelUniverse u = smart_home_universe(c);
    if (mutated_c1_range >= -1) {
        int32_t c1 = *u.find_channel(sym(variant == HomeVariant::Gps ? "gc1" : "c1"));
        u.channels[c1].range = mutated_c1_range == -1 ? Range::local() : Range::finite(mutated_c1_range);
    }
    HomeNames h(u);
    CanonNet init = canonicalize(build_smart_home(c, u), u);

    PropertyReport manual_on{"manual-mode-switches-boiler-on", 0, {}};
    PropertyReport cold_on{"low-temperature-switches-boiler-on", 0, {}};
    PropertyReport warm_off{"high-temperature-switches-boiler-off", 0, {}};
    PropertyReport exclusive{"room-lights-mutually-exclusive", 0, {}};

    // Reachable states and the stable derivatives (the initial state and
    // every state entered through a time step).
    StateStore store;
    store.intern(init);
    std::vector<uint32_t> derivatives{0};
    for (size_t at = 0; at < store.size(); ++at) {
        for (auto& [label, succ] : reductions(store.state(at), u)) {
            bool fresh = false;
            uint32_t id = store.intern(succ, &fresh);
            if (fresh && store.size() > budget) throw BudgetExceeded(store.size(), 0);
            if (label.kind == ReductionLabel::TimeStep &&
                std::find(derivatives.begin(), derivatives.end(), id) == derivatives.end())
                derivatives.push_back(id);
        }
    }

    Barb light1_on{h.light1, h.loc1, h.on};
    Barb light2_on{h.light2, h.loc4, h.on};
    for (size_t i = 0; i < store.size(); ++i) {
        auto bs = barbs(store.state(i));
        if (std::binary_search(bs.begin(), bs.end(), light1_on) &&
            std::binary_search(bs.begin(), bs.end(), light2_on) && exclusive.counterexamples.size() < 8)
            exclusive.counterexamples.push_back({store.state(i).hash_hex(), "both room lights are on"});
    }
    exclusive.states_checked = store.size();

    auto settle_and_check = [&](const CanonNet& start, const Barb& expected, PropertyReport& report) {
        report.states_checked += 1;
        for (const CanonNet& s : instantaneous_closure(start, u, budget)) {
            bool quiescent = true;
            for (auto& [label, succ] : reductions(s, u))
                if (label.instantaneous()) quiescent = false;
            if (!quiescent) continue;
            auto bs = barbs(s);
            if (!std::binary_search(bs.begin(), bs.end(), expected) && report.counterexamples.size() < 8)
                report.counterexamples.push_back(
                    {s.hash_hex(), "settled state lacks barb " + barb_to_string(expected, u)});
        }
    };

    Barb boiler_on{h.boiler, h.loc2, h.on};
    Barb boiler_off{h.boiler, h.loc2, h.off};
    for (uint32_t d : derivatives) {
        const CanonNet state = store.state(d);
        // the touchscreen is updated wherever the phone currently is
        LocId phone_loc = 0;
        for (const NetNode& n : state.nodes)
            if (n.iface.sensor(h.mode)) phone_loc = n.loc;

        settle_and_check(update_sensor(state, h.mode, phone_loc, h.man, u), boiler_on, manual_on);
        for (int64_t t : c.temperatures) {
            CanonNet updated = update_sensor(state, h.temp, h.loc2, Value::integer(t), u);
            if (t < c.theta)
                settle_and_check(updated, boiler_on, cold_on);
            else
                settle_and_check(updated, boiler_off, warm_off);
        }
    }

    return {manual_on, cold_on, warm_off, exclusive};
}

SystemEqualityResult check_system_equality(const ScenarioConfig& cfg, size_t budget, bool check_full) {
    ModelUniverse u = smart_home_universe(cfg);
    SystemEqualityResult result;

    CanonNet left = canonicalize(build_light_subsystem(HomeVariant::Proximity, cfg, u), u);
    CanonNet right = canonicalize(build_light_subsystem(HomeVariant::Gps, cfg, u), u);
    result.light_subsystem = weak_bisimilar(left, right, u, budget);

    if (check_full) {
        ScenarioConfig prox = cfg;
        prox.variant = HomeVariant::Proximity;
        ScenarioConfig gps = cfg;
        gps.variant = HomeVariant::Gps;
        CanonNet full_l = canonicalize(build_smart_home(prox, u), u);
        CanonNet full_r = canonicalize(build_smart_home(gps, u), u);
        result.full_system = weak_bisimilar(full_l, full_r, u, budget);
        result.full_system_checked = true;
    }
    return result;
}

}  // namespace iotsem
