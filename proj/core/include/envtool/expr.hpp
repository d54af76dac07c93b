#pragma once

#include <map>
#include <memory>
#include <string>

#include "envtool/errors.hpp"
#include "envtool/jets.hpp"
#include "envtool/vec.hpp"

namespace envtool {

enum class NodeKind { Num, VarU, VarV, Neg, Add, Sub, Mul, Div, IntPow, Call };
enum class Func { Sin, Cos, Tan, Sqrt, Exp, Log, Atan };

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

// Immutable AST node. pos is the byte offset of the construct in the source
// text it was parsed from (builders use 0).
struct ExprNode {
    NodeKind kind;
    double num = 0.0;
    int ipow = 0;
    Func fn = Func::Sin;
    ExprPtr a, b;
    std::size_t pos = 0;
};

using Bindings = std::map<std::string, double>;

// Scalar expression in the fixed variables {u, v}. Grammar v1:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := atom ('^' unary)?          (right-associative, binds tightest)
//   atom   := number | 'u' | 'v' | 'pi' | 'e' | name | fn '(' expr ')' | '(' expr ')'
// No implicit multiplication. '^' exponents must be constant; integer
// exponents become exact integer powers, non-integer constants k rewrite to
// exp(k*log(base)). Bound names are substituted as numeric literals.
class Expr {
public:
    Expr() = default;
    explicit Expr(ExprPtr root) : root_(std::move(root)) {}

    static Expr parse(const std::string& src, const Bindings& bindings = {});

    const ExprPtr& root() const { return root_; }
    bool empty() const { return root_ == nullptr; }

    std::string print() const;

    double value(double u, double v) const;
    Jet1 jet1(double u, double v) const;
    Jet2 jet2(double u, double v) const;

    // Composition: every occurrence of u becomes forU's AST, every v forV's.
    Expr substitute(const Expr& forU, const Expr& forV) const;

    bool dependsOnVars() const;

private:
    ExprPtr root_;
};

// Operation named evalJet in the module contract.
inline Jet2 evalJet(const Expr& e, double u0, double v0) { return e.jet2(u0, v0); }

// AST builders (used to compose rotated frames and test expressions).
Expr exprNum(double c);
Expr exprU();
Expr exprV();
Expr exprNeg(const Expr& a);
Expr exprAdd(const Expr& a, const Expr& b);
Expr exprSub(const Expr& a, const Expr& b);
Expr exprMul(const Expr& a, const Expr& b);
Expr exprDiv(const Expr& a, const Expr& b);
Expr exprIPow(const Expr& a, int k);
Expr exprCall(Func f, const Expr& a);

// Three component expressions evaluating to a vector in R^3.
struct VecExpr {
    Expr cx, cy, cz;

    // Parses "(e1, e2, e3)".
    static VecExpr parse(const std::string& src, const Bindings& bindings = {});

    std::string print() const;

    Vec3 value(double u, double v) const { return {cx.value(u, v), cy.value(u, v), cz.value(u, v)}; }
    Vec3j1 jet1(double u, double v) const { return {cx.jet1(u, v), cy.jet1(u, v), cz.jet1(u, v)}; }
    Vec3j2 jet2(double u, double v) const { return {cx.jet2(u, v), cy.jet2(u, v), cz.jet2(u, v)}; }

    VecExpr substitute(const Expr& forU, const Expr& forV) const {
        return {cx.substitute(forU, forV), cy.substitute(forU, forV), cz.substitute(forU, forV)};
    }
};

}  // namespace envtool
