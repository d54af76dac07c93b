#include "envtool/expr.hpp"

#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

namespace envtool {

namespace {

ExprPtr node(NodeKind k, std::size_t pos) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->pos = pos;
    return n;
}

ExprPtr numNode(double c, std::size_t pos = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Num;
    n->num = c;
    n->pos = pos;
    return n;
}

ExprPtr unary(NodeKind k, ExprPtr a, std::size_t pos = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->pos = pos;
    return n;
}

ExprPtr binary(NodeKind k, ExprPtr a, ExprPtr b, std::size_t pos = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = k;
    n->a = std::move(a);
    n->b = std::move(b);
    n->pos = pos;
    return n;
}

ExprPtr callNode(Func f, ExprPtr a, std::size_t pos = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::Call;
    n->fn = f;
    n->a = std::move(a);
    n->pos = pos;
    return n;
}

ExprPtr ipowNode(ExprPtr a, int k, std::size_t pos = 0) {
    auto n = std::make_shared<ExprNode>();
    n->kind = NodeKind::IntPow;
    n->a = std::move(a);
    n->ipow = k;
    n->pos = pos;
    return n;
}

// --- Lexer ------------------------------------------------------------

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    Tok kind = Tok::End;
    std::size_t pos = 0;
    double num = 0.0;
    std::string text{};
};

struct Lexer {
    const std::string& src;
    std::size_t i = 0;

    Token next() {
        while (i < src.size() && (src[i] == ' ' || src[i] == '\t' || src[i] == '\n' || src[i] == '\r')) ++i;
        const std::size_t p = i;
        if (i >= src.size()) return {Tok::End, p};
        const char c = src[i];
        switch (c) {
            case '+': ++i; return {Tok::Plus, p};
            case '-': ++i; return {Tok::Minus, p};
            case '*': ++i; return {Tok::Star, p};
            case '/': ++i; return {Tok::Slash, p};
            case '^': ++i; return {Tok::Caret, p};
            case '(': ++i; return {Tok::LParen, p};
            case ')': ++i; return {Tok::RParen, p};
            case ',': ++i; return {Tok::Comma, p};
            default: break;
        }
        if ((c >= '0' && c <= '9') || c == '.') {
            double v = 0.0;
            const char* first = src.data() + i;
            const char* last = src.data() + src.size();
            auto res = std::from_chars(first, last, v);
            if (res.ec != std::errc{} || res.ptr == first)
                throw ParseError("malformed number", p, "number");
            i = static_cast<std::size_t>(res.ptr - src.data());
            Token t{Tok::Number, p};
            t.num = v;
            return t;
        }
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_') {
            std::size_t j = i;
            while (j < src.size() &&
                   ((src[j] >= 'a' && src[j] <= 'z') || (src[j] >= 'A' && src[j] <= 'Z') ||
                    (src[j] >= '0' && src[j] <= '9') || src[j] == '_'))
                ++j;
            Token t{Tok::Ident, p};
            t.text = src.substr(i, j - i);
            i = j;
            return t;
        }
        throw ParseError(std::string("unexpected character '") + c + "'", p,
                         "number, identifier, operator or parenthesis");
    }
};

// --- Parser -----------------------------------------------------------

struct Parser {
    Lexer lex;
    Token cur;
    const Bindings& bindings;

    Parser(const std::string& src, const Bindings& b) : lex{src}, bindings(b) { cur = lex.next(); }

    void advance() { cur = lex.next(); }

    [[noreturn]] void fail(const std::string& msg, const std::string& expected) {
        throw ParseError(msg + " at byte " + std::to_string(cur.pos), cur.pos, expected);
    }

    void expect(Tok k, const std::string& what) {
        if (cur.kind != k) fail("expected " + what, what);
        advance();
    }

    ExprPtr parseExpr() {
        ExprPtr lhs = parseTerm();
        while (cur.kind == Tok::Plus || cur.kind == Tok::Minus) {
            const NodeKind k = cur.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
            const std::size_t p = cur.pos;
            advance();
            lhs = binary(k, lhs, parseTerm(), p);
        }
        return lhs;
    }

    ExprPtr parseTerm() {
        ExprPtr lhs = parseUnary();
        while (cur.kind == Tok::Star || cur.kind == Tok::Slash) {
            const NodeKind k = cur.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
            const std::size_t p = cur.pos;
            advance();
            lhs = binary(k, lhs, parseUnary(), p);
        }
        return lhs;
    }

    ExprPtr parseUnary() {
        if (cur.kind == Tok::Minus) {
            const std::size_t p = cur.pos;
            advance();
            return unary(NodeKind::Neg, parseUnary(), p);
        }
        return parsePower();
    }

    ExprPtr parsePower() {
        ExprPtr base = parseAtom();
        if (cur.kind != Tok::Caret) return base;
        const std::size_t p = cur.pos;
        advance();
        ExprPtr e = parseUnary();  // right-associative exponent
        double k = 0.0;
        if (!constantFold(e.get(), k))
            throw ParseError("'^' exponent must be a constant expression", p, "constant exponent");
        const double r = std::round(k);
        if (std::abs(k - r) <= 1e-12 && std::abs(r) <= 1e9)
            return ipowNode(base, static_cast<int>(r), p);
        // Non-integer constant exponent: rewrite as exp(k*log(base)).
        return callNode(Func::Exp, binary(NodeKind::Mul, numNode(k, p), callNode(Func::Log, base, p), p), p);
    }

    ExprPtr parseAtom() {
        switch (cur.kind) {
            case Tok::Number: {
                ExprPtr n = numNode(cur.num, cur.pos);
                advance();
                checkNoJuxtaposition();
                return n;
            }
            case Tok::LParen: {
                advance();
                ExprPtr e = parseExpr();
                expect(Tok::RParen, "')'");
                checkNoJuxtaposition();
                return e;
            }
            case Tok::Ident: {
                const std::string name = cur.text;
                const std::size_t p = cur.pos;
                advance();
                if (cur.kind == Tok::LParen) {
                    Func f;
                    if (!lookupFunc(name, f))
                        throw ParseError("unknown function '" + name + "'", p,
                                         "sin, cos, tan, sqrt, exp, log, atan");
                    advance();
                    ExprPtr arg = parseExpr();
                    expect(Tok::RParen, "')'");
                    checkNoJuxtaposition();
                    return callNode(f, arg, p);
                }
                ExprPtr n = identAtom(name, p);
                checkNoJuxtaposition();
                return n;
            }
            default:
                fail("expected expression", "number, identifier, '-', function or '('");
        }
    }

    ExprPtr identAtom(const std::string& name, std::size_t p) {
        if (name == "u") return node(NodeKind::VarU, p);
        if (name == "v") return node(NodeKind::VarV, p);
        if (name == "pi") return numNode(3.14159265358979323846, p);
        if (name == "e") return numNode(2.71828182845904523536, p);
        auto it = bindings.find(name);
        if (it != bindings.end()) return numNode(it->second, p);
        Func f;
        if (lookupFunc(name, f))
            throw ParseError("function '" + name + "' requires parenthesized argument", p, "'('");
        throw ParseError("unknown identifier '" + name + "'", p, "u, v, pi, e or a bound name");
    }

    // An atom directly followed by a number/identifier/'(' is implicit
    // multiplication, which the grammar rejects.
    void checkNoJuxtaposition() {
        if (cur.kind == Tok::Number || cur.kind == Tok::Ident || cur.kind == Tok::LParen)
            fail("implicit multiplication is not allowed; use '*'",
                 "operator, ')', ',' or end of input");
    }

    static bool lookupFunc(const std::string& name, Func& out) {
        if (name == "sin") out = Func::Sin;
        else if (name == "cos") out = Func::Cos;
        else if (name == "tan") out = Func::Tan;
        else if (name == "sqrt") out = Func::Sqrt;
        else if (name == "exp") out = Func::Exp;
        else if (name == "log") out = Func::Log;
        else if (name == "atan") out = Func::Atan;
        else return false;
        return true;
    }

    static bool constantFold(const ExprNode* n, double& out) {
        switch (n->kind) {
            case NodeKind::Num: out = n->num; return true;
            case NodeKind::VarU:
            case NodeKind::VarV: return false;
            case NodeKind::Neg: {
                double a = 0.0;
                if (!constantFold(n->a.get(), a)) return false;
                out = -a;
                return true;
            }
            case NodeKind::Add:
            case NodeKind::Sub:
            case NodeKind::Mul:
            case NodeKind::Div: {
                double a = 0.0, b = 0.0;
                if (!constantFold(n->a.get(), a) || !constantFold(n->b.get(), b)) return false;
                switch (n->kind) {
                    case NodeKind::Add: out = a + b; break;
                    case NodeKind::Sub: out = a - b; break;
                    case NodeKind::Mul: out = a * b; break;
                    default: out = a / b; break;
                }
                return true;
            }
            case NodeKind::IntPow: {
                double a = 0.0;
                if (!constantFold(n->a.get(), a)) return false;
                out = std::pow(a, n->ipow);
                return true;
            }
            case NodeKind::Call: {
                double a = 0.0;
                if (!constantFold(n->a.get(), a)) return false;
                switch (n->fn) {
                    case Func::Sin: out = std::sin(a); break;
                    case Func::Cos: out = std::cos(a); break;
                    case Func::Tan: out = std::tan(a); break;
                    case Func::Sqrt: out = std::sqrt(a); break;
                    case Func::Exp: out = std::exp(a); break;
                    case Func::Log: out = std::log(a); break;
                    case Func::Atan: out = std::atan(a); break;
                }
                return true;
            }
        }
        return false;
    }
};

// --- Printer ----------------------------------------------------------

int precedence(const ExprNode* n) {
    switch (n->kind) {
        case NodeKind::Add:
        case NodeKind::Sub: return 1;
        case NodeKind::Mul:
        case NodeKind::Div: return 2;
        case NodeKind::Neg: return 3;
        case NodeKind::IntPow: return 4;
        default: return 5;
    }
}

std::string formatNumber(double v) {
    char buf[64];
    // Shortest representation that round-trips exactly.
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

const char* funcName(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Sqrt: return "sqrt";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Atan: return "atan";
    }
    return "?";
}

void printNode(const ExprNode* n, std::string& out) {
    auto child = [&](const ExprNode* c, int minPrec) {
        if (precedence(c) < minPrec) {
            out += '(';
            printNode(c, out);
            out += ')';
        } else {
            printNode(c, out);
        }
    };
    switch (n->kind) {
        case NodeKind::Num: out += formatNumber(n->num); break;
        case NodeKind::VarU: out += 'u'; break;
        case NodeKind::VarV: out += 'v'; break;
        case NodeKind::Neg:
            out += '-';
            child(n->a.get(), 3);
            break;
        case NodeKind::Add:
            child(n->a.get(), 1);
            out += '+';
            child(n->b.get(), 2);
            break;
        case NodeKind::Sub:
            child(n->a.get(), 1);
            out += '-';
            child(n->b.get(), 2);
            break;
        case NodeKind::Mul:
            child(n->a.get(), 2);
            out += '*';
            child(n->b.get(), 3);
            break;
        case NodeKind::Div:
            child(n->a.get(), 2);
            out += '/';
            child(n->b.get(), 3);
            break;
        case NodeKind::IntPow:
            child(n->a.get(), 5);
            out += '^';
            if (n->ipow < 0) {
                out += '-';
                out += std::to_string(-static_cast<long long>(n->ipow));
            } else {
                out += std::to_string(n->ipow);
            }
            break;
        case NodeKind::Call:
            out += funcName(n->fn);
            out += '(';
            printNode(n->a.get(), out);
            out += ')';
            break;
    }
}

// --- Evaluator --------------------------------------------------------

inline double scalarValue(double x) { return x; }
inline double scalarValue(const Jet1& x) { return x.val; }
inline double scalarValue(const Jet2& x) { return x.val; }

inline double constantOf(double c, double) { return c; }
inline Jet1 constantOf(double c, const Jet1&) { return Jet1::constant(c); }
inline Jet2 constantOf(double c, const Jet2&) { return Jet2::constant(c); }

template <class T>
T evalNode(const ExprNode* n, const T& u, const T& v, double u0, double v0) {
    using std::atan;
    using std::cos;
    using std::exp;
    using std::log;
    using std::sin;
    using std::sqrt;
    using std::tan;
    switch (n->kind) {
        case NodeKind::Num: return constantOf(n->num, u);
        case NodeKind::VarU: return u;
        case NodeKind::VarV: return v;
        case NodeKind::Neg: return -evalNode(n->a.get(), u, v, u0, v0);
        case NodeKind::Add: return evalNode(n->a.get(), u, v, u0, v0) + evalNode(n->b.get(), u, v, u0, v0);
        case NodeKind::Sub: return evalNode(n->a.get(), u, v, u0, v0) - evalNode(n->b.get(), u, v, u0, v0);
        case NodeKind::Mul: return evalNode(n->a.get(), u, v, u0, v0) * evalNode(n->b.get(), u, v, u0, v0);
        case NodeKind::Div: {
            T a = evalNode(n->a.get(), u, v, u0, v0);
            T b = evalNode(n->b.get(), u, v, u0, v0);
            if (scalarValue(b) == 0.0)
                throw EvalDomainError("division by zero", n->pos, u0, v0);
            return a / b;
        }
        case NodeKind::IntPow: {
            T a = evalNode(n->a.get(), u, v, u0, v0);
            if (n->ipow < 0 && scalarValue(a) == 0.0)
                throw EvalDomainError("zero raised to a negative power", n->pos, u0, v0);
            if constexpr (std::is_same_v<T, double>) {
                return std::pow(a, n->ipow);
            } else {
                return ipow(a, n->ipow);
            }
        }
        case NodeKind::Call: {
            T a = evalNode(n->a.get(), u, v, u0, v0);
            switch (n->fn) {
                case Func::Sin: return sin(a);
                case Func::Cos: return cos(a);
                case Func::Tan: return tan(a);
                case Func::Sqrt:
                    if (scalarValue(a) < 0.0)
                        throw EvalDomainError("sqrt of a negative value", n->pos, u0, v0);
                    return sqrt(a);
                case Func::Exp: return exp(a);
                case Func::Log:
                    if (scalarValue(a) <= 0.0)
                        throw EvalDomainError("log of a non-positive value", n->pos, u0, v0);
                    return log(a);
                case Func::Atan: return atan(a);
            }
        }
    }
    throw Error("corrupt expression node");
}

ExprPtr substituteNode(const ExprPtr& n, const ExprPtr& forU, const ExprPtr& forV) {
    switch (n->kind) {
        case NodeKind::VarU: return forU;
        case NodeKind::VarV: return forV;
        case NodeKind::Num: return n;
        case NodeKind::Neg: return unary(NodeKind::Neg, substituteNode(n->a, forU, forV), n->pos);
        case NodeKind::IntPow: return ipowNode(substituteNode(n->a, forU, forV), n->ipow, n->pos);
        case NodeKind::Call: return callNode(n->fn, substituteNode(n->a, forU, forV), n->pos);
        default:
            return binary(n->kind, substituteNode(n->a, forU, forV), substituteNode(n->b, forU, forV), n->pos);
    }
}

bool nodeDependsOnVars(const ExprNode* n) {
    switch (n->kind) {
        case NodeKind::VarU:
        case NodeKind::VarV: return true;
        case NodeKind::Num: return false;
        case NodeKind::Neg:
        case NodeKind::IntPow:
        case NodeKind::Call: return nodeDependsOnVars(n->a.get());
        default: return nodeDependsOnVars(n->a.get()) || nodeDependsOnVars(n->b.get());
    }
}

}  // namespace

Expr Expr::parse(const std::string& src, const Bindings& bindings) {
    if (src.empty()) throw ParseError("empty expression", 0, "expression");
    Parser p(src, bindings);
    ExprPtr root = p.parseExpr();
    if (p.cur.kind != Tok::End)
        throw ParseError("trailing input at byte " + std::to_string(p.cur.pos), p.cur.pos, "end of input");
    return Expr(root);
}

std::string Expr::print() const {
    if (!root_) return "";
    std::string out;
    printNode(root_.get(), out);
    return out;
}

double Expr::value(double u, double v) const { return evalNode<double>(root_.get(), u, v, u, v); }

Jet1 Expr::jet1(double u, double v) const {
    return evalNode<Jet1>(root_.get(), Jet1{u, 1, 0}, Jet1{v, 0, 1}, u, v);
}

Jet2 Expr::jet2(double u, double v) const {
    return evalNode<Jet2>(root_.get(), Jet2::varU(u), Jet2::varV(v), u, v);
}

Expr Expr::substitute(const Expr& forU, const Expr& forV) const {
    return Expr(substituteNode(root_, forU.root(), forV.root()));
}

bool Expr::dependsOnVars() const { return root_ && nodeDependsOnVars(root_.get()); }

Expr exprNum(double c) { return Expr(numNode(c)); }
Expr exprU() { return Expr(node(NodeKind::VarU, 0)); }
Expr exprV() { return Expr(node(NodeKind::VarV, 0)); }
Expr exprNeg(const Expr& a) { return Expr(unary(NodeKind::Neg, a.root())); }
Expr exprAdd(const Expr& a, const Expr& b) { return Expr(binary(NodeKind::Add, a.root(), b.root())); }
Expr exprSub(const Expr& a, const Expr& b) { return Expr(binary(NodeKind::Sub, a.root(), b.root())); }
Expr exprMul(const Expr& a, const Expr& b) { return Expr(binary(NodeKind::Mul, a.root(), b.root())); }
Expr exprDiv(const Expr& a, const Expr& b) { return Expr(binary(NodeKind::Div, a.root(), b.root())); }
Expr exprIPow(const Expr& a, int k) { return Expr(ipowNode(a.root(), k)); }
Expr exprCall(Func f, const Expr& a) { return Expr(callNode(f, a.root())); }

VecExpr VecExpr::parse(const std::string& src, const Bindings& bindings) {
    Parser p(src, bindings);
    if (p.cur.kind != Tok::LParen)
        throw ParseError("vector expression must start with '('", p.cur.pos, "'('");
    p.advance();
    ExprPtr x = p.parseExpr();
    p.expect(Tok::Comma, "','");
    ExprPtr y = p.parseExpr();
    p.expect(Tok::Comma, "','");
    ExprPtr z = p.parseExpr();
    p.expect(Tok::RParen, "')'");
    if (p.cur.kind != Tok::End)
        throw ParseError("trailing input at byte " + std::to_string(p.cur.pos), p.cur.pos, "end of input");
    return {Expr(x), Expr(y), Expr(z)};
}

std::string VecExpr::print() const {
    return "(" + cx.print() + ", " + cy.print() + ", " + cz.print() + ")";
}

}  // namespace envtool
