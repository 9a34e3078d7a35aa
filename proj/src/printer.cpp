#include "iotsem/printer.hpp"

namespace iotsem {

namespace {

struct ProcPrinter {
    const ModelUniverse& u;
    const CanonNet* ctx;

    std::string chan(ChanRef c) const {
        if (is_restricted(c)) {
            if (ctx && restricted_slot(c) < ctx->restricted.size()) {
                Sym src = ctx->restricted[restricted_slot(c)].source_name;
                if (src) return sym_text(src);
            }
            return "#" + std::to_string(restricted_slot(c));
        }
        return sym_text(u.channels[c].name);
    }

    std::string value(const Value& v) const { return value_to_string(v, u); }

    std::string vexpr(const ValueExpr& e) const { return e.is_var ? sym_text(e.var) : value(e.lit); }

    std::string bexp(const BExprPtr& e) const {
        switch (e->kind) {
            case BKind::Lit: return e->lit ? "true" : "false";
            case BKind::Eq: return vexpr(e->a) + " = " + vexpr(e->b);
            case BKind::Lt: return vexpr(e->a) + " < " + vexpr(e->b);
            case BKind::Leq: return vexpr(e->a) + " <= " + vexpr(e->b);
            case BKind::Not: return "!(" + bexp(e->x) + ")";
            case BKind::And: return "(" + bexp(e->x) + ") && (" + bexp(e->y) + ")";
        }
        return "false";
    }

    static std::string var_name(uint32_t depth, uint32_t index) {
        return "V" + std::to_string(depth - 1 - index);
    }

    // seq-level rendering; parallel compositions get parenthesised inside
    // prefixes and branches
    std::string seq(Pid p, uint32_t depth) const {
        const ProcTerm& t = term(p);
        if (t.kind == PKind::Par) return "(" + par(p, depth) + ")";
        return par(p, depth);
    }

    std::string par(Pid p, uint32_t depth) const {
        const ProcTerm& t = term(p);
        switch (t.kind) {
            case PKind::Nil: return "nil";
            case PKind::Prefix:
                switch (t.pk) {
                    case PrefixKind::Sleep: return "sigma. " + seq(t.cont, depth);
                    case PrefixKind::GetPos: return "@(" + sym_text(t.bind) + "). " + seq(t.cont, depth);
                    case PrefixKind::ReadSensor:
                        return sym_text(t.device) + "?(" + sym_text(t.bind) + "). " + seq(t.cont, depth);
                    case PrefixKind::WriteActuator:
                        return sym_text(t.device) + "!" + vexpr(t.payload) + ". " + seq(t.cont, depth);
                }
                return "?";
            case PKind::Timeout: {
                std::string comm = t.is_send
                                       ? chan(t.chan) + "!<" + (t.payload.is_var || !(t.payload.lit == Value::unit())
                                                                    ? vexpr(t.payload)
                                                                    : "") + ">"
                                       : chan(t.chan) + "?(" + sym_text(t.bind) + ")";
                return "timeout(" + comm + ". " + par(t.then_, depth) + ", " + par(t.else_, depth) + ")";
            }
            case PKind::Par: {
                std::string out;
                for (size_t i = 0; i < t.parts.size(); ++i) {
                    if (i) out += " | ";
                    out += seq(t.parts[i], depth);
                }
                return out;
            }
            case PKind::Cond:
                return "[" + bexp(t.guard) + "] " + seq(t.then_, depth) + " ; " + seq(t.else_, depth);
            case PKind::Var: return var_name(depth, t.index);
            case PKind::Fix: return "fix " + var_name(depth + 1, 0) + ". " + seq(t.body, depth + 1);
        }
        return "?";
    }
};

std::string print_iface(const Interface& iface, const ModelUniverse& u) {
    std::string out = "{";
    bool first = true;
    for (auto& [n, v] : iface.sensors) {
        if (!first) out += ", ";
        first = false;
        out += sym_text(n) + "=" + value_to_string(v, u);
    }
    for (auto& [n, v] : iface.actuators) {
        if (!first) out += ", ";
        first = false;
        out += sym_text(n) + "=" + value_to_string(v, u);
    }
    return out + "}";
}

std::string range_text(Range r) {
    if (r.is_local()) return "local";
    if (r.is_infinite()) return "inf";
    return std::to_string(r.v);
}

}  // namespace

std::string pretty_process(Pid p, const ModelUniverse& u, const CanonNet* ctx) {
    return ProcPrinter{u, ctx}.par(p, 0);
}

std::string pretty_network(const CanonNet& net, const ModelUniverse& u) {
    std::string out;
    for (const RestrictedInfo& r : net.restricted)
        out += "new " + (r.source_name ? sym_text(r.source_name) : std::string("?")) + ". ";
    if (net.nodes.empty()) return out + "0";
    ProcPrinter pp{u, &net};
    for (size_t i = 0; i < net.nodes.size(); ++i) {
        const NetNode& n = net.nodes[i];
        if (i) out += "\n  | ";
        out += sym_text(n.name) + "[" + print_iface(n.iface, u) + " |> " + pp.par(n.proc, 0) + "] " +
               (n.mobile ? "mob" : "stat") + " @ " + u.loc_name(n.loc);
    }
    return out;
}

std::string print_model(const CanonNet& net, const ModelUniverse& u) {
    std::string out;
    if (!u.locations.empty()) {
        out += "location";
        for (Sym l : u.locations) out += " " + sym_text(l);
        out += "\n";
    }
    for (size_t i = 0; i < u.locations.size(); ++i)
        for (size_t j = i + 1; j < u.locations.size(); ++j)
            out += "dist " + u.loc_name(i) + " " + u.loc_name(j) + " = " + std::to_string(u.dist[i][j]) + "\n";
    for (const ChannelDecl& c : u.channels) {
        out += "channel " + sym_text(c.name) + " range " + range_text(c.range) + " domain {";
        for (const Value& v : c.domain.values) out += " " + value_to_string(v, u);
        out += " }\n";
    }
    for (const SensorDecl& s : u.sensors) {
        out += "sensor " + sym_text(s.name) + " domain {";
        for (const Value& v : s.domain.values) out += " " + value_to_string(v, u);
        out += " } kind ";
        out += s.kind == SensorKind::NodeDependent ? "node" : "location";
        out += "\n";
    }
    for (const ActuatorDecl& a : u.actuators) {
        out += "actuator " + sym_text(a.name) + " domain {";
        for (const Value& v : a.domain.values) out += " " + value_to_string(v, u);
        out += " }\n";
    }
    out += "delta " + std::to_string(u.delta) + "\n\n";
    out += "system = " + pretty_network(net, u) + "\n";
    return out;
}

}  // namespace iotsem
