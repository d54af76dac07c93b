#pragma once

#include <array>
#include <optional>
#include <string>

#include "envtool/domain.hpp"
#include "envtool/expr.hpp"
#include "envtool/tolerances.hpp"
#include "envtool/vec.hpp"

namespace envtool {

// A framed surface given by component expressions. When n or s is omitted
// the frame is derived pointwise from x at regular points; surfaces with
// singular points must supply both explicitly. An optional frame rotation
// s^theta = cos(theta) s - sin(theta) t is applied after evaluation.
struct FramedSurfaceSpec {
    VecExpr x;
    std::optional<VecExpr> n;
    std::optional<VecExpr> s;
    Domain domain;
    std::optional<Expr> rotation;
};

// A framed surface together with a positive radius function.
struct SphereFamily {
    FramedSurfaceSpec fs;
    Expr lambda;
};

// Everything downstream formulas need at one parameter point, to second
// order in the surface map and first order in the moving frame.
struct FrameEval {
    double u = 0.0, v = 0.0;
    Vec3j2 x;
    Vec3j1 xu, xv;       // first-order jets of the partials of x
    Vec3j1 n, s, t;
    Vec3j1 nu, nv, su, sv;  // first-order jets of the frame partials
    bool frameSecondOrderExact = true;  // false when the frame came from deriveFrame
};

// First-order jets of the ten basic invariants.
struct InvariantJets {
    Jet1 a1, b1, a2, b2;
    Jet1 e1, f1, g1, e2, f2, g2;
};

// Per-point invariants with the frame attached.
struct InvariantData {
    Vec2 point;
    Vec3j1 n, s, t;
    double a1 = 0, b1 = 0, a2 = 0, b2 = 0;
    double e1 = 0, f1 = 0, g1 = 0, e2 = 0, f2 = 0, g2 = 0;
};

// Pointwise frame construction at a regular point:
//   n = (x_u x x_v)/|x_u x x_v|,  s = x_u/|x_u|.
// Throws SingularPointError when |x_u x x_v| is near zero.
std::pair<Vec3, Vec3> deriveFrame(const VecExpr& x, double u0, double v0, const Tolerances& tol = {});

// Evaluates the spec at a point. Checks the framed-surface axioms
// (|n|=1, |s|=1, n.s=0, x_u.n=0, x_v.n=0) to eps_residual and throws
// FramedAxiomError on violation. checkAxioms=false skips the gate (used by
// callers that probe deliberately broken data).
FrameEval evalFrame(const FramedSurfaceSpec& fs, double u0, double v0, const Tolerances& tol = {},
                    bool checkAxioms = true);

InvariantJets invariantJets(const FrameEval& fe);

InvariantData basicInvariants(const FramedSurfaceSpec& fs, double u0, double v0, const Tolerances& tol = {});

// The six signed residuals of the integrability conditions. Derivative
// terms (a_{1,v}, b_{2,u}, e_{1,v}, ...) use central differences of the
// invariants with the given step; genuine framed surfaces give ~1e-6.
std::array<double, 6> integrabilityResiduals(const FramedSurfaceSpec& fs, double u0, double v0,
                                             const Tolerances& tol = {}, double h = 1e-5);

// Same residuals evaluated from user-provided invariant values plus the four
// derivative values; lets tests feed hand-perturbed invariant sets.
std::array<double, 6> integrabilityResidualsFromValues(const InvariantData& c, double a1v, double a2u,
                                                       double b1v, double b2u, double e1v, double e2u,
                                                       double f1v, double f2u, double g1v, double g2u);

// Composes the spec with the parameter change (u,v) = phi(p,q) by AST
// substitution. The Jacobian of phi is probed for degeneracy on a coarse
// grid of newDomain; a near-zero determinant raises DegenerateJacobianError.
FramedSurfaceSpec reparametrize(const FramedSurfaceSpec& fs, const Expr& phiU, const Expr& phiV,
                                const Domain& newDomain, const Tolerances& tol = {});
SphereFamily reparametrize(const SphereFamily& fam, const Expr& phiU, const Expr& phiV,
                           const Domain& newDomain, const Tolerances& tol = {});

// Rotates the frame by theta(u,v); rotations compose additively.
FramedSurfaceSpec rotateFrame(const FramedSurfaceSpec& fs, const Expr& theta);

}  // namespace envtool
