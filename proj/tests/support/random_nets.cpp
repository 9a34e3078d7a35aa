#include "support/random_nets.hpp"

namespace iotsem::testsupport {

NetGen::NetGen(uint64_t seed) : rng_(seed) {
    LocId u0 = u_.add_location(sym("u0"));
    LocId u1 = u_.add_location(sym("u1"));
    LocId u2 = u_.add_location(sym("u2"));
    u_.set_distance(u0, u1, 1);
    u_.set_distance(u1, u2, 1);
    u_.set_distance(u0, u2, 2);
    u_.delta = 1;
    ValueDomain bits{{Value::integer(0), Value::integer(1)}};
    channels_.push_back(u_.add_channel(sym("k0"), Range::local(), bits));
    channels_.push_back(u_.add_channel(sym("k1"), Range::finite(1), bits));
    channels_.push_back(u_.add_channel(sym("k2"), Range::infinite(), bits));
    node_sensor_ = sym("gs");
    loc_sensor_ = sym("gl");
    u_.add_sensor(node_sensor_, SensorKind::NodeDependent, bits);
    u_.add_sensor(loc_sensor_, SensorKind::LocationDependent, bits);
    for (int i = 0; i < 3; ++i) {
        Sym a = sym("ga" + std::to_string(i));
        u_.add_actuator(a, bits);
        actuators_.push_back(a);
    }
    u_.finalize();
}

Value NetGen::pick_bit() { return Value::integer(rnd(2)); }

ValueExpr NetGen::gen_payload(int32_t chan, const Ctx& ctx) {
    (void)chan;
    if (!ctx.value_vars.empty() && rnd(3) == 0)
        return ValueExpr::variable(ctx.value_vars[rnd((int)ctx.value_vars.size())]);
    return ValueExpr::value(pick_bit());
}

// ctx.fix_depth counts enclosing fix binders; ctx.guard_floor is how many of
// the outermost ones lie above a sigma prefix or timeout else-branch and may
// therefore be referenced. Legal de Bruijn indices are the guard_floor
// largest ones.
Pid NetGen::gen_proc(int depth, Ctx& ctx) {
    if (depth <= 0) return rnd(2) ? p_nil() : p_sleep(p_nil());

    bool var_ok = ctx.guard_floor >= 1;
    int choice = rnd(var_ok ? 12 : 10);
    switch (choice) {
        case 0: return p_nil();
        case 1: {
            int old = ctx.guard_floor;
            ctx.guard_floor = ctx.fix_depth;  // everything entered so far is now guarded
            Pid cont = gen_proc(depth - 1, ctx);
            ctx.guard_floor = old;
            return p_sleep(cont);
        }
        case 2: {
            Sym x = sym("v" + std::to_string(ctx.value_vars.size()));
            ctx.value_vars.push_back(x);
            Pid cont = gen_proc(depth - 1, ctx);
            ctx.value_vars.pop_back();
            return p_getpos(x, cont);
        }
        case 3: {
            if (ctx.sensors.empty()) return p_sleep(gen_proc(depth - 1, ctx));
            Sym s = ctx.sensors[rnd((int)ctx.sensors.size())];
            Sym x = sym("v" + std::to_string(ctx.value_vars.size()));
            ctx.value_vars.push_back(x);
            Pid cont = gen_proc(depth - 1, ctx);
            ctx.value_vars.pop_back();
            return p_read(x, s, cont);
        }
        case 4: {
            if (ctx.actuators.empty()) return p_nil();
            Sym a = ctx.actuators[rnd((int)ctx.actuators.size())];
            return p_write(ValueExpr::value(pick_bit()), a, gen_proc(depth - 1, ctx));
        }
        case 5: {
            int32_t c = channels_[rnd((int)channels_.size())];
            Pid then_ = gen_proc(depth - 1, ctx);
            int old = ctx.guard_floor;
            ctx.guard_floor = ctx.fix_depth;
            Pid else_ = gen_proc(depth - 1, ctx);
            ctx.guard_floor = old;
            return p_timeout_send(c, gen_payload(c, ctx), then_, else_);
        }
        case 6: {
            int32_t c = channels_[rnd((int)channels_.size())];
            Sym x = sym("v" + std::to_string(ctx.value_vars.size()));
            ctx.value_vars.push_back(x);
            Pid then_ = gen_proc(depth - 1, ctx);
            ctx.value_vars.pop_back();
            int old = ctx.guard_floor;
            ctx.guard_floor = ctx.fix_depth;
            Pid else_ = gen_proc(depth - 1, ctx);
            ctx.guard_floor = old;
            return p_timeout_recv(c, x, then_, else_);
        }
        case 7: return p_par(gen_proc(depth - 1, ctx), gen_proc(depth - 1, ctx));
        case 8: {
            ValueExpr a = ctx.value_vars.empty()
                              ? ValueExpr::value(pick_bit())
                              : ValueExpr::variable(ctx.value_vars[rnd((int)ctx.value_vars.size())]);
            BExprPtr g = rnd(2) ? BoolExpr::eq(a, ValueExpr::value(pick_bit()))
                                : BoolExpr::leq(a, ValueExpr::value(pick_bit()));
            if (rnd(4) == 0) g = BoolExpr::negate(std::move(g));
            Pid then_ = gen_proc(depth - 1, ctx);
            Pid else_ = gen_proc(depth - 1, ctx);
            return p_cond(std::move(g), then_, else_);
        }
        case 9:
        case 10: {
            ++ctx.fix_depth;
            Pid body = gen_proc(depth - 1, ctx);
            --ctx.fix_depth;
            return p_fix(body);
        }
        default: {
            // guarded occurrence of one of the guard_floor outermost binders
            uint32_t index = static_cast<uint32_t>(ctx.fix_depth - ctx.guard_floor + rnd(ctx.guard_floor));
            return p_var(index);
        }
    }
}

Network NetGen::generate(int max_nodes, int max_depth) {
    Network net;
    int nodes = 1 + rnd(max_nodes);
    bool node_sensor_used = false;
    for (int i = 0; i < nodes; ++i) {
        NetNode n;
        n.name = sym("gn" + std::to_string(i));
        n.mobile = rnd(2) == 1;
        n.loc = static_cast<LocId>(rnd((int)u_.locations.size()));

        Ctx ctx;
        if (!node_sensor_used && rnd(2) == 0) {
            node_sensor_used = true;
            n.iface.set_sensor(node_sensor_, pick_bit());
            ctx.sensors.push_back(node_sensor_);
        }
        if (!n.mobile && rnd(2) == 0) {
            n.iface.set_sensor(loc_sensor_, pick_bit());
            ctx.sensors.push_back(loc_sensor_);
        }
        if (rnd(3) != 0) {
            n.iface.set_actuator(actuators_[i], pick_bit());
            ctx.actuators.push_back(actuators_[i]);
        }
        n.proc = gen_proc(max_depth, ctx);
        net.nodes.push_back(std::move(n));
    }
    for (int32_t c : channels_)
        if (rnd(3) == 0) net.restricted.push_back(c);
    return net;
}

}  // namespace iotsem::testsupport
