#include "iotsem/parser.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <vector>

namespace iotsem {

namespace {

// --------------------------------------------------------------------------
// Lexer
// --------------------------------------------------------------------------

enum class Tok {
    Ident, Int, LBrack, RBrack, LBrace, RBrace, LParen, RParen, Dot, Semi, Comma,
    Eq, Lt, Leq, Gt, Bang, Quest, At, Bar, IfaceSep, AndAnd, Unit, Zero, End
};

struct Token {
    Tok kind;
    std::string text;
    int64_t num = 0;
    int line = 1, col = 1;
};

struct Lexer {
    const std::string& src;
    size_t pos = 0;
    int line = 1, col = 1;
    std::vector<Token> tokens;

    explicit Lexer(const std::string& s) : src(s) { run(); }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

    char peek(size_t off = 0) const { return pos + off < src.size() ? src[pos + off] : '\0'; }

    char advance() {
        char c = src[pos++];
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        return c;
    }

    void push(Tok k, std::string text, int l, int c, int64_t num = 0) {
        tokens.push_back({k, std::move(text), num, l, c});
    }

    void run() {
        while (pos < src.size()) {
            char c = peek();
            int l = line, co = col;
            if (c == '#') {
                while (pos < src.size() && peek() != '\n') advance();
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
                continue;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::string word;
                while (pos < src.size() &&
                       (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_' || peek() == '\''))
                    word += advance();
                push(Tok::Ident, std::move(word), l, co);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) ||
                (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
                std::string digits;
                if (c == '-') digits += advance();
                while (pos < src.size() && std::isdigit(static_cast<unsigned char>(peek()))) digits += advance();
                int64_t v = std::stoll(digits);
                if (digits == "0")
                    push(Tok::Zero, digits, l, co, 0);
                else
                    push(Tok::Int, digits, l, co, v);
                continue;
            }
            advance();
            switch (c) {
                case '[': push(Tok::LBrack, "[", l, co); break;
                case ']': push(Tok::RBrack, "]", l, co); break;
                case '{': push(Tok::LBrace, "{", l, co); break;
                case '}': push(Tok::RBrace, "}", l, co); break;
                case '(': push(Tok::LParen, "(", l, co); break;
                case ')': push(Tok::RParen, ")", l, co); break;
                case '.': push(Tok::Dot, ".", l, co); break;
                case ';': push(Tok::Semi, ";", l, co); break;
                case ',': push(Tok::Comma, ",", l, co); break;
                case '=': push(Tok::Eq, "=", l, co); break;
                case '!': push(Tok::Bang, "!", l, co); break;
                case '?': push(Tok::Quest, "?", l, co); break;
                case '@': push(Tok::At, "@", l, co); break;
                case '>': push(Tok::Gt, ">", l, co); break;
                case '<':
                    if (peek() == '=') {
                        advance();
                        push(Tok::Leq, "<=", l, co);
                    } else if (peek() == '>') {
                        advance();
                        push(Tok::Unit, "<>", l, co);
                    } else {
                        push(Tok::Lt, "<", l, co);
                    }
                    break;
                case '|':
                    if (peek() == '>') {
                        advance();
                        push(Tok::IfaceSep, "|>", l, co);
                    } else {
                        push(Tok::Bar, "|", l, co);
                    }
                    break;
                case '&':
                    if (peek() == '&') {
                        advance();
                        push(Tok::AndAnd, "&&", l, co);
                    } else {
                        fail("stray '&'");
                    }
                    break;
                default: fail(std::string("unexpected character '") + c + "'");
            }
        }
        push(Tok::End, "", line, col);
    }
};

// --------------------------------------------------------------------------
// Surface AST (names kept textual until a resolution pass converts process
// variables to de Bruijn indices and identifiers to values)
// --------------------------------------------------------------------------

struct PVal {
    enum K { Int, Bool, UnitV, Name } k = UnitV;
    int64_t i = 0;
    bool b = false;
    std::string name;
};

struct PBexp;
using PBexpPtr = std::unique_ptr<PBexp>;

struct PBexp {
    BKind kind = BKind::Lit;
    bool lit = false;
    PVal a, b;
    PBexpPtr x, y;
};

struct PAst;
using PAstPtr = std::unique_ptr<PAst>;

struct PAst {
    enum K { Nil, Sleep, GetPos, Read, Write, SendPfx, RecvPfx, Timeout, Par, Cond, Var, Fix } k = Nil;
    std::string name;       // bound variable / device / channel / process variable
    std::string chan;       // channel name for communication forms
    PVal payload;           // Write / SendPfx / Timeout-send
    bool timeout_send = false;
    PBexpPtr guard;
    std::vector<PAstPtr> kids;
    int line = 0, col = 0;
};

struct PNode {
    std::string name;
    std::vector<std::pair<std::string, PVal>> iface;
    PAstPtr proc;
    bool mobile = false;
    std::string loc;
    int line = 0, col = 0;
};

struct PNetwork {
    std::vector<std::string> restricted;
    std::vector<PNode> nodes;
};

// --------------------------------------------------------------------------
// Parser
// --------------------------------------------------------------------------

struct Parser {
    std::vector<Token> toks;
    size_t at = 0;
    ModelUniverse universe;
    std::map<std::string, PAstPtr> defs;
    PNetwork pnet;
    bool have_system = false;

    const Token& cur() const { return toks[at]; }
    const Token& next() { return toks[at++]; }

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, cur().line, cur().col); }

    bool at_word(const char* w) const { return cur().kind == Tok::Ident && cur().text == w; }

    bool eat_word(const char* w) {
        if (!at_word(w)) return false;
        ++at;
        return true;
    }

    void expect(Tok k, const char* what) {
        if (cur().kind != k) fail(std::string("expected ") + what);
        ++at;
    }

    std::string expect_ident(const char* what) {
        if (cur().kind != Tok::Ident) fail(std::string("expected ") + what);
        return next().text;
    }

    // ---------------- universe ----------------

    PVal parse_value() {
        const Token& t = cur();
        switch (t.kind) {
            case Tok::Int:
            case Tok::Zero: {
                ++at;
                PVal v;
                v.k = PVal::Int;
                v.i = t.num;
                return v;
            }
            case Tok::Unit: {
                ++at;
                return PVal{};
            }
            case Tok::Ident: {
                ++at;
                PVal v;
                if (t.text == "true" || t.text == "false") {
                    v.k = PVal::Bool;
                    v.b = t.text == "true";
                } else {
                    v.k = PVal::Name;
                    v.name = t.text;
                }
                return v;
            }
            default: fail("expected a value");
        }
    }

    // Ground resolution for universe declarations and interfaces: names are
    // locations or atoms, never variables.
    Value ground(const PVal& v) {
        switch (v.k) {
            case PVal::Int: return Value::integer(v.i);
            case PVal::Bool: return Value::boolean(v.b);
            case PVal::UnitV: return Value::unit();
            case PVal::Name: {
                if (auto l = universe.find_location(sym(v.name))) return Value::location(*l);
                return Value::make_atom(sym(v.name));
            }
        }
        return Value::unit();
    }

    ValueDomain parse_domain() {
        if (!eat_word("domain")) fail("expected 'domain'");
        expect(Tok::LBrace, "'{'");
        ValueDomain dom;
        while (cur().kind != Tok::RBrace) {
            dom.values.push_back(ground(parse_value()));
            if (cur().kind == Tok::Comma) ++at;
        }
        expect(Tok::RBrace, "'}'");
        for (size_t i = 0; i < dom.values.size(); ++i)
            for (size_t j = i + 1; j < dom.values.size(); ++j)
                if (dom.values[i] == dom.values[j]) fail("duplicate value in domain");
        return dom;
    }

    void parse_universe_decl() {
        if (eat_word("location")) {
            do {
                universe.add_location(sym(expect_ident("location name")));
            } while (cur().kind == Tok::Ident && !is_decl_keyword(cur().text));
            return;
        }
        if (eat_word("dist")) {
            std::string a = expect_ident("location"), b = expect_ident("location");
            expect(Tok::Eq, "'='");
            if (cur().kind != Tok::Int && cur().kind != Tok::Zero) fail("expected a distance");
            int64_t d = next().num;
            auto la = universe.find_location(sym(a)), lb = universe.find_location(sym(b));
            if (!la || !lb) fail("unknown location in dist");
            universe.set_distance(*la, *lb, d);
            return;
        }
        if (eat_word("channel")) {
            std::string name = expect_ident("channel name");
            if (!eat_word("range")) fail("expected 'range'");
            Range r;
            if (eat_word("local"))
                r = Range::local();
            else if (eat_word("inf"))
                r = Range::infinite();
            else if (cur().kind == Tok::Int || cur().kind == Tok::Zero)
                r = Range::finite(next().num);
            else
                fail("expected 'local', 'inf' or a number");
            universe.add_channel(sym(name), r, parse_domain());
            return;
        }
        if (eat_word("sensor")) {
            std::string name = expect_ident("sensor name");
            ValueDomain dom = parse_domain();
            if (!eat_word("kind")) fail("expected 'kind'");
            SensorKind kind;
            if (eat_word("node"))
                kind = SensorKind::NodeDependent;
            else if (eat_word("location"))
                kind = SensorKind::LocationDependent;
            else
                fail("expected 'node' or 'location'");
            universe.add_sensor(sym(name), kind, dom);
            return;
        }
        if (eat_word("actuator")) {
            std::string name = expect_ident("actuator name");
            universe.add_actuator(sym(name), parse_domain());
            return;
        }
        if (eat_word("delta")) {
            if (cur().kind != Tok::Int && cur().kind != Tok::Zero) fail("expected a number");
            universe.delta = static_cast<uint32_t>(next().num);
            return;
        }
        fail("expected a universe declaration, 'def' or 'system'");
    }

    static bool is_decl_keyword(const std::string& w) {
        return w == "location" || w == "dist" || w == "channel" || w == "sensor" || w == "actuator" ||
               w == "delta" || w == "def" || w == "system";
    }

    // ---------------- boolean expressions ----------------

    PBexpPtr parse_bexp() {
        PBexpPtr left = parse_bexp_atom();
        while (cur().kind == Tok::AndAnd) {
            ++at;
            auto e = std::make_unique<PBexp>();
            e->kind = BKind::And;
            e->x = std::move(left);
            e->y = parse_bexp_atom();
            left = std::move(e);
        }
        return left;
    }

    PBexpPtr parse_bexp_atom() {
        if (cur().kind == Tok::Bang) {
            ++at;
            auto e = std::make_unique<PBexp>();
            e->kind = BKind::Not;
            e->x = parse_bexp_atom();
            return e;
        }
        if (cur().kind == Tok::LParen) {
            ++at;
            auto e = parse_bexp();
            expect(Tok::RParen, "')'");
            return e;
        }
        PVal a = parse_value();
        if (cur().kind == Tok::Eq || cur().kind == Tok::Lt || cur().kind == Tok::Leq) {
            Tok op = next().kind;
            PVal b = parse_value();
            auto e = std::make_unique<PBexp>();
            e->kind = op == Tok::Eq ? BKind::Eq : (op == Tok::Lt ? BKind::Lt : BKind::Leq);
            e->a = a;
            e->b = b;
            return e;
        }
        if (a.k == PVal::Bool) {
            auto e = std::make_unique<PBexp>();
            e->kind = BKind::Lit;
            e->lit = a.b;
            return e;
        }
        fail("expected a comparison or boolean literal");
    }

    // ---------------- processes ----------------

    PAstPtr ast(PAst::K k) {
        auto p = std::make_unique<PAst>();
        p->k = k;
        p->line = cur().line;
        p->col = cur().col;
        return p;
    }

    PAstPtr parse_proc() {
        PAstPtr left = parse_seq();
        while (cur().kind == Tok::Bar) {
            ++at;
            auto p = ast(PAst::Par);
            p->kids.push_back(std::move(left));
            p->kids.push_back(parse_seq());
            left = std::move(p);
        }
        return left;
    }

    PAstPtr parse_seq() {
        if (eat_word("nil")) return ast(PAst::Nil);
        if (cur().kind == Tok::LParen) {
            ++at;
            auto p = parse_proc();
            expect(Tok::RParen, "')'");
            return p;
        }
        if (eat_word("sigma")) {
            auto p = ast(PAst::Sleep);
            expect(Tok::Dot, "'.' after sigma");
            p->kids.push_back(parse_seq());
            return p;
        }
        if (cur().kind == Tok::At) {
            ++at;
            auto p = ast(PAst::GetPos);
            expect(Tok::LParen, "'('");
            p->name = expect_ident("variable");
            expect(Tok::RParen, "')'");
            expect(Tok::Dot, "'.'");
            p->kids.push_back(parse_seq());
            return p;
        }
        if (eat_word("timeout")) {
            auto p = ast(PAst::Timeout);
            expect(Tok::LParen, "'('");
            parse_comm_into(*p);
            expect(Tok::Dot, "'.' after the communication");
            p->kids.push_back(parse_proc());
            expect(Tok::Comma, "','");
            p->kids.push_back(parse_proc());
            expect(Tok::RParen, "')'");
            return p;
        }
        if (eat_word("fix")) {
            auto p = ast(PAst::Fix);
            p->name = expect_ident("recursion variable");
            expect(Tok::Dot, "'.'");
            p->kids.push_back(parse_seq());
            return p;
        }
        if (cur().kind == Tok::LBrack) {
            ++at;
            auto p = ast(PAst::Cond);
            p->guard = parse_bexp();
            expect(Tok::RBrack, "']'");
            p->kids.push_back(parse_seq());
            expect(Tok::Semi, "';' separating the branches");
            p->kids.push_back(parse_seq());
            return p;
        }
        if (cur().kind == Tok::Ident) {
            std::string name = next().text;
            if (cur().kind == Tok::Quest) {
                ++at;
                expect(Tok::LParen, "'('");
                std::string var = expect_ident("variable");
                expect(Tok::RParen, "')'");
                expect(Tok::Dot, "'.'");
                // a sensor read or a bare channel receive, depending on the name
                if (universe.find_sensor(sym(name))) {
                    auto p = ast(PAst::Read);
                    p->name = var;
                    p->chan = name;
                    p->kids.push_back(parse_seq());
                    return p;
                }
                if (universe.find_channel(sym(name))) {
                    auto p = ast(PAst::RecvPfx);
                    p->name = var;
                    p->chan = name;
                    p->kids.push_back(parse_seq());
                    return p;
                }
                fail("'" + name + "' is neither a sensor nor a channel");
            }
            if (cur().kind == Tok::Bang) {
                ++at;
                if (cur().kind == Tok::Lt || cur().kind == Tok::Unit) {
                    // channel send: c!<v> or c!<>
                    PVal payload;
                    if (cur().kind == Tok::Unit) {
                        ++at;
                    } else {
                        ++at;
                        payload = parse_value();
                        expect(Tok::Gt, "'>'");
                    }
                    if (!universe.find_channel(sym(name))) fail("unknown channel '" + name + "'");
                    auto p = ast(PAst::SendPfx);
                    p->chan = name;
                    p->payload = payload;
                    expect(Tok::Dot, "'.'");
                    p->kids.push_back(parse_seq());
                    return p;
                }
                // actuator write: a!v
                auto p = ast(PAst::Write);
                p->chan = name;
                p->payload = parse_value();
                expect(Tok::Dot, "'.'");
                p->kids.push_back(parse_seq());
                return p;
            }
            auto p = ast(PAst::Var);
            p->name = name;
            return p;
        }
        fail("expected a process");
    }

    void parse_comm_into(PAst& p) {
        std::string chan = expect_ident("channel");
        if (!universe.find_channel(sym(chan))) fail("unknown channel '" + chan + "'");
        p.chan = chan;
        if (cur().kind == Tok::Bang) {
            ++at;
            p.timeout_send = true;
            if (cur().kind == Tok::Unit) {
                ++at;
                p.payload = PVal{};
            } else {
                expect(Tok::Lt, "'<'");
                p.payload = parse_value();
                expect(Tok::Gt, "'>'");
            }
        } else if (cur().kind == Tok::Quest) {
            ++at;
            p.timeout_send = false;
            expect(Tok::LParen, "'('");
            p.name = expect_ident("variable");
            expect(Tok::RParen, "')'");
        } else {
            fail("expected '!' or '?' in the communication");
        }
    }

    // ---------------- networks ----------------

    PNetwork parse_network() {
        PNetwork net;
        while (eat_word("new")) {
            net.restricted.push_back(expect_ident("channel"));
            expect(Tok::Dot, "'.'");
        }
        parse_net_par(net);
        return net;
    }

    void parse_net_par(PNetwork& net) {
        parse_net_atom(net);
        while (cur().kind == Tok::Bar) {
            ++at;
            parse_net_atom(net);
        }
    }

    void parse_net_atom(PNetwork& net) {
        if (cur().kind == Tok::Zero) {
            ++at;
            return;
        }
        if (cur().kind == Tok::LParen) {
            ++at;
            PNetwork inner = parse_network();
            expect(Tok::RParen, "')'");
            for (auto& c : inner.restricted) {
                if (std::find(net.restricted.begin(), net.restricted.end(), c) != net.restricted.end())
                    fail("channel '" + c + "' restricted twice");
                net.restricted.push_back(c);
            }
            for (auto& n : inner.nodes) net.nodes.push_back(std::move(n));
            return;
        }
        PNode node;
        node.line = cur().line;
        node.col = cur().col;
        node.name = expect_ident("node name");
        expect(Tok::LBrack, "'['");
        expect(Tok::LBrace, "'{'");
        while (cur().kind != Tok::RBrace) {
            std::string entry = expect_ident("sensor or actuator name");
            expect(Tok::Eq, "'='");
            node.iface.emplace_back(entry, parse_value());
            if (cur().kind == Tok::Comma) ++at;
        }
        expect(Tok::RBrace, "'}'");
        expect(Tok::IfaceSep, "'|>'");
        node.proc = parse_proc();
        expect(Tok::RBrack, "']'");
        if (eat_word("stat"))
            node.mobile = false;
        else if (eat_word("mob"))
            node.mobile = true;
        else
            fail("expected 'stat' or 'mob'");
        expect(Tok::At, "'@'");
        node.loc = expect_ident("location");
        pnet_check_loc(node);
        net.nodes.push_back(std::move(node));
    }

    void pnet_check_loc(const PNode& n) {
        if (!universe.find_location(sym(n.loc)))
            throw ParseError("unknown location '" + n.loc + "'", n.line, n.col);
    }

    // ---------------- resolution to interned terms ----------------

    struct Scope {
        std::vector<std::string> proc_vars;   // innermost last
        std::vector<std::string> value_vars;  // innermost last
        std::set<std::string> expanding;      // defs in flight, to catch cycles
    };

    ValueExpr resolve_val(const PVal& v, const Scope& sc, int line, int col) {
        if (v.k == PVal::Name) {
            if (std::find(sc.value_vars.begin(), sc.value_vars.end(), v.name) != sc.value_vars.end())
                return ValueExpr::variable(sym(v.name));
            if (auto l = universe.find_location(sym(v.name))) return ValueExpr::value(Value::location(*l));
            return ValueExpr::value(Value::make_atom(sym(v.name)));
        }
        (void)line;
        (void)col;
        switch (v.k) {
            case PVal::Int: return ValueExpr::value(Value::integer(v.i));
            case PVal::Bool: return ValueExpr::value(Value::boolean(v.b));
            default: return ValueExpr::value(Value::unit());
        }
    }

    BExprPtr resolve_bexp(const PBexp& e, const Scope& sc) {
        switch (e.kind) {
            case BKind::Lit: return BoolExpr::literal(e.lit);
            case BKind::Eq: return BoolExpr::eq(resolve_val(e.a, sc, 0, 0), resolve_val(e.b, sc, 0, 0));
            case BKind::Lt: return BoolExpr::lt(resolve_val(e.a, sc, 0, 0), resolve_val(e.b, sc, 0, 0));
            case BKind::Leq: return BoolExpr::leq(resolve_val(e.a, sc, 0, 0), resolve_val(e.b, sc, 0, 0));
            case BKind::Not: return BoolExpr::negate(resolve_bexp(*e.x, sc));
            case BKind::And: return BoolExpr::conj(resolve_bexp(*e.x, sc), resolve_bexp(*e.y, sc));
        }
        return BoolExpr::literal(false);
    }

    int32_t chan_id(const std::string& name, int line, int col) {
        auto c = universe.find_channel(sym(name));
        if (!c) throw ParseError("unknown channel '" + name + "'", line, col);
        return *c;
    }

    Pid resolve(const PAst& p, Scope& sc) {
        switch (p.k) {
            case PAst::Nil: return p_nil();
            case PAst::Sleep: return p_sleep(resolve(*p.kids[0], sc));
            case PAst::GetPos: {
                sc.value_vars.push_back(p.name);
                Pid cont = resolve(*p.kids[0], sc);
                sc.value_vars.pop_back();
                return p_getpos(sym(p.name), cont);
            }
            case PAst::Read: {
                sc.value_vars.push_back(p.name);
                Pid cont = resolve(*p.kids[0], sc);
                sc.value_vars.pop_back();
                return p_read(sym(p.name), sym(p.chan), cont);
            }
            case PAst::Write:
                return p_write(resolve_val(p.payload, sc, p.line, p.col), sym(p.chan), resolve(*p.kids[0], sc));
            case PAst::SendPfx:
                return p_send_prefix(chan_id(p.chan, p.line, p.col), resolve_val(p.payload, sc, p.line, p.col),
                                     resolve(*p.kids[0], sc));
            case PAst::RecvPfx: {
                sc.value_vars.push_back(p.name);
                Pid cont = resolve(*p.kids[0], sc);
                sc.value_vars.pop_back();
                return p_recv_prefix(chan_id(p.chan, p.line, p.col), sym(p.name), cont);
            }
            case PAst::Timeout: {
                int32_t c = chan_id(p.chan, p.line, p.col);
                if (p.timeout_send) {
                    Pid then_ = resolve(*p.kids[0], sc);
                    Pid else_ = resolve(*p.kids[1], sc);
                    return p_timeout_send(c, resolve_val(p.payload, sc, p.line, p.col), then_, else_);
                }
                sc.value_vars.push_back(p.name);
                Pid then_ = resolve(*p.kids[0], sc);
                sc.value_vars.pop_back();
                Pid else_ = resolve(*p.kids[1], sc);
                return p_timeout_recv(c, sym(p.name), then_, else_);
            }
            case PAst::Par: {
                Pid a = resolve(*p.kids[0], sc);
                Pid b = resolve(*p.kids[1], sc);
                return p_par(a, b);
            }
            case PAst::Cond: {
                BExprPtr g = resolve_bexp(*p.guard, sc);
                Pid then_ = resolve(*p.kids[0], sc);
                Pid else_ = resolve(*p.kids[1], sc);
                return p_cond(std::move(g), then_, else_);
            }
            case PAst::Fix: {
                sc.proc_vars.push_back(p.name);
                Pid body = resolve(*p.kids[0], sc);
                sc.proc_vars.pop_back();
                return p_fix(body);
            }
            case PAst::Var: {
                for (size_t i = sc.proc_vars.size(); i-- > 0;)
                    if (sc.proc_vars[i] == p.name) return p_var(static_cast<uint32_t>(sc.proc_vars.size() - 1 - i));
                auto def = defs.find(p.name);
                if (def == defs.end())
                    throw ParseError("unknown process or definition '" + p.name + "'", p.line, p.col);
                if (sc.expanding.count(p.name))
                    throw ParseError("definition '" + p.name + "' expands itself; use fix for recursion", p.line,
                                     p.col);
                sc.expanding.insert(p.name);
                Pid r = resolve(*def->second, sc);
                sc.expanding.erase(p.name);
                return r;
            }
        }
        return p_nil();
    }

    ParsedModel finish() {
        ParsedModel model;
        universe.finalize();
        model.universe = universe;

        Network net;
        for (auto& cname : pnet.restricted) {
            auto c = universe.find_channel(sym(cname));
            if (!c) throw ParseError("unknown restricted channel '" + cname + "'", 0, 0);
            net.restricted.push_back(*c);
        }
        for (auto& pn : pnet.nodes) {
            NetNode node;
            node.name = sym(pn.name);
            node.mobile = pn.mobile;
            node.loc = *universe.find_location(sym(pn.loc));
            for (auto& [entry, v] : pn.iface) {
                Value gv = ground(v);
                if (universe.find_sensor(sym(entry)))
                    node.iface.set_sensor(sym(entry), gv);
                else if (universe.find_actuator(sym(entry)))
                    node.iface.set_actuator(sym(entry), gv);
                else
                    throw ParseError("'" + entry + "' is neither a sensor nor an actuator", pn.line, pn.col);
            }
            Scope sc;
            node.proc = resolve(*pn.proc, sc);
            net.nodes.push_back(std::move(node));
        }
        model.network = std::move(net);
        return model;
    }

    void run() {
        while (cur().kind != Tok::End) {
            if (at_word("def")) {
                ++at;
                std::string name = expect_ident("definition name");
                expect(Tok::Eq, "'='");
                defs[name] = parse_proc();
                continue;
            }
            if (at_word("system")) {
                ++at;
                expect(Tok::Eq, "'='");
                pnet = parse_network();
                have_system = true;
                continue;
            }
            if (have_system) fail("unexpected trailing input after the system block");
            parse_universe_decl();
        }
        if (!have_system) fail("missing 'system = ...' block");
    }
};

}  // namespace

ParsedModel parse_model(const std::string& text) {
    Lexer lex(text);
    Parser parser;
    parser.toks = std::move(lex.tokens);
    parser.run();
    return parser.finish();
}

}  // namespace iotsem
