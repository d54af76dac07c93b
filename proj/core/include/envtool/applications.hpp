#pragma once

#include <optional>
#include <vector>

#include "envtool/envelope.hpp"

namespace envtool {

// One root of det M(delta) = 0 with M(delta) = A + delta * [[e1,f1],[e2,f2]],
// plus the angle theta in [0,pi) whose (sin, cos) spans the nullspace.
struct EvoluteRoot {
    double delta = 0.0;
    std::optional<double> theta;  // absent when M(delta) vanishes entirely
    double residual = 0.0;        // |M(delta) (sin theta, cos theta)^T|
    bool doubleRoot = false;
    bool rowsDegenerate = false;
};

struct EvoluteSolution {
    std::vector<EvoluteRoot> roots;  // ascending delta
    bool detIdenticallyZero = false;  // every delta admissible
    bool complexPair = false;         // no real roots (negative discriminant)
    Vec3 x;                           // surface point
    InvariantData inv;

    // Evolute point and frame for a root: xbar = x + delta n,
    // nbar = sin(theta) s + cos(theta) t, sbar = n.
    Vec3 point(const EvoluteRoot& r) const;
    Vec3 newNormal(const EvoluteRoot& r) const;  // requires r.theta
    Vec3 newS() const;
};

EvoluteSolution evoluteAt(const FramedSurfaceSpec& fs, double u0, double v0,
                          const Tolerances& tol = {});

struct PedalPoint {
    Vec3 pe;    // ((x - P) . l) l
    Vec3 base;  // P
};

PedalPoint pedalAt(const FramedSurfaceSpec& fs, const Vec3& P, double u0, double v0,
                   const Tolerances& tol = {});
PedalPoint lPedalAt(const FramedSurfaceSpec& fs, const VecExpr& l, const Vec3& P, double u0,
                    double v0, const Tolerances& tol = {});

// Theorem: for a Sigma2- or Sigma3-dense family, the center surface x is an
// evolute of the envelope's framed structure (f, nu, omega); concretely
// a_f1 - lambda e_f1 = 0 and a_f2 - lambda e_f2 = 0. force=true runs the
// residuals even when the density hypothesis fails (probing broken input).
struct EvoluteCheckReport {
    bool hypothesisMet = false;
    double maxResidual1 = 0.0, maxResidual2 = 0.0;
    // | |nu|^2 - 1 | of the gamma == 0 construction: nonzero exactly when the
    // would-be envelope leaves the sphere family.
    double maxUnitResidual = 0.0;
    std::size_t checked = 0;
    bool pass = false;
};

EvoluteCheckReport verifyEvolute(const SphereFamily& fam, const GridSpec& grid,
                                 const Tolerances& tol = {}, bool force = false,
                                 double tolerance = 1e-6);

// Theorem: a Sigma1-dense family with one constant envelope f1 has
// f2 = Pe_{f1}[2x - f1], i.e. f2 - f1 = 2((x - f1) . n) n.
struct PedalCheckReport {
    bool hypothesisMet = false;
    Vec3 constantBranch;
    int constantBranchSign = 0;  // +1 when the +gamma branch is constant
    double maxResidual = 0.0;
    std::size_t checked = 0;
    bool pass = false;
};

PedalCheckReport verifyPedal(const SphereFamily& fam, const GridSpec& grid,
                             const Tolerances& tol = {}, double tolerance = 1e-8);

// Corollary: when x is an evolute of (f, nu, omega) — supplied here as the
// unique envelope of the Sigma2/Sigma3-dense companion family — and x is
// regular with x.n != 0 off a skipped locus, Pe_P[x] = n-Pe_P[f]. Points
// with (x-P).n near zero are skipped and reported as reduced coverage.
struct CorollaryReport {
    double maxDiff = 0.0;
    double evoluteResidual = 0.0;
    double coverage = 0.0;  // fraction of valid points actually compared
    std::size_t checked = 0;
    bool pass = false;
};

CorollaryReport verifyCorollary(const SphereFamily& companion, const Vec3& P, const GridSpec& grid,
                                const Tolerances& tol = {}, double tolerance = 1e-8);

}  // namespace envtool
