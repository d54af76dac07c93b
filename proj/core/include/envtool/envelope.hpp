#pragma once

#include <functional>
#include <optional>
#include <variant>

#include "envtool/creative.hpp"

namespace envtool {

enum class BranchKind { PlusGamma, MinusGamma, UniqueGammaZero, Custom };

// Scalar field supplied as an exact jet closure, so custom branches get the
// same derivative quality as expression-backed ones.
using JetFn = std::function<Jet2(const Jet2&, const Jet2&)>;

struct CustomBranch {
    JetFn theta;               // angle along the Sigma4 chord / Sigma5 azimuth
    std::optional<JetFn> phi;  // Sigma5 polar angle
};

struct Branch {
    BranchKind kind = BranchKind::PlusGamma;
    std::optional<CustomBranch> custom;

    static Branch plusGamma() { return {BranchKind::PlusGamma, std::nullopt}; }
    static Branch minusGamma() { return {BranchKind::MinusGamma, std::nullopt}; }
    static Branch uniqueGammaZero() { return {BranchKind::UniqueGammaZero, std::nullopt}; }
    static Branch customTheta(JetFn theta) {
        return {BranchKind::Custom, CustomBranch{std::move(theta), std::nullopt}};
    }
    static Branch customThetaPhi(JetFn theta, JetFn phi) {
        return {BranchKind::Custom, CustomBranch{std::move(theta), std::move(phi)}};
    }
};

JetFn jetFnFromExpr(const Expr& e);
JetFn jetFnConstant(double c);

// Creator and envelope point with exact first-order jets.
struct CreatorJet {
    Jet1 alpha, beta, gamma;
    Vec3j1 nu;  // creator, |nu| = 1
    Vec3j1 f;   // f = x + lambda * nu
    Jet1 lambda;
    CreatorSolution sol;
    FrameEval frame;
};

CreatorJet creatorJet(const SphereFamily& fam, double u0, double v0, const Branch& branch,
                      const Tolerances& tol = {});

// gamma == 0 construction from the min-norm solution of the linear system,
// with no solvability checks; the evolute-relation verifier uses it to probe
// deliberately broken radius functions.
CreatorJet gammaZeroCreatorJet(const SphereFamily& fam, double u0, double v0, const Tolerances& tol = {});

struct EnvelopePoint {
    Vec3 f;
    Vec3 nu;
};

EnvelopePoint envelopeAt(const SphereFamily& fam, double u0, double v0, const Branch& branch,
                         const Tolerances& tol = {});

// Candidate envelope: an expression, a constructed branch, or an opaque
// sampled map (derivatives by central differences, looser tolerance).
using SampledMap = std::function<Vec3(double, double)>;
using EnvelopeCandidate = std::variant<VecExpr, Branch, SampledMap>;

struct ResidualReport {
    double maxOnSphere = 0.0;  // max |  |f-x|^2 - lambda^2  |
    double maxTanU = 0.0;      // max | f_u . (f-x) |
    double maxTanV = 0.0;      // max | f_v . (f-x) |
    double maxScaled = 0.0;    // max of the three scale-relative residuals
    double fracOnSphereFail = 0.0;  // fraction of points failing condition (1)
    std::size_t checked = 0;
    double tolUsed = 0.0;
    bool pass = false;
};

ResidualReport verifyEnvelope(const EnvelopeCandidate& candidate, const SphereFamily& fam,
                              const GridSpec& grid, const Tolerances& tol = {});

enum class CountKind { One, Two, Uncountable, NotCreative, Undetermined };

const char* countName(CountKind k);

// Envelope-count decision per the density trichotomy. Mixed evidence that
// matches none of the three sufficient conditions is reported as
// Undetermined with the evidence attached rather than guessed at.
struct EnvelopeCountResult {
    CountKind kind = CountKind::Undetermined;
    GridClassification evidence;
};

// Pure decision from classification evidence: NotCreative wins, then the
// sufficient density conditions in theorem order.
CountKind decideCount(const GridClassification& evidence);

EnvelopeCountResult envelopeCount(const SphereFamily& fam, const GridSpec& grid,
                                  const Tolerances& tol = {});

// Framed structure (f, nu, omega) of a constructed envelope and its basic
// invariants.
struct EnvelopeFrame {
    Vec3j1 f, nu, omega, mu;
    double af1 = 0, bf1 = 0, af2 = 0, bf2 = 0;
    double ef1 = 0, ff1 = 0, gf1 = 0, ef2 = 0, ff2 = 0, gf2 = 0;
};

EnvelopeFrame envelopeFrame(const SphereFamily& fam, const Branch& branch, double u0, double v0,
                            const Tolerances& tol = {});

// Two distinct creators agreeing outside the radius-r ball around the given
// Sigma4/Sigma5 point, both passing verifyEnvelope on the grid.
struct WitnessResult {
    Branch base, perturbed;
    ResidualReport baseReport, perturbedReport;
    double separation = 0.0;  // |nu_eps - nu_0| at the point
    Vec2 point;
    double radius = 0.0, epsilon = 0.0;
};

WitnessResult multiplicityWitness(const SphereFamily& fam, Vec2 point, double radius,
                                  const GridSpec& grid, const Tolerances& tol = {},
                                  double epsilon = 0.5);

}  // namespace envtool
