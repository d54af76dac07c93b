#include "envtool/envelope.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "envtool/parallel.hpp"

namespace envtool {

JetFn jetFnFromExpr(const Expr& e) {
    return [e](const Jet2& u, const Jet2& v) {
        // Expressions evaluate from point values; u/v arrive as coordinate jets.
        return e.jet2(u.val, v.val);
    };
}

JetFn jetFnConstant(double c) {
    return [c](const Jet2&, const Jet2&) { return Jet2::constant(c); };
}

namespace {

struct LinearJets {
    Jet1 a1, b1, a2, b2, lu, lv;
};

LinearJets linearJets(const FrameEval& fe, const Jet2& lam2) {
    const InvariantJets ij = invariantJets(fe);
    return {ij.a1, ij.b1, ij.a2, ij.b2, derivU(lam2), derivV(lam2)};
}

// Min-norm point of the dominant-row solution line, as jets.
struct RowJets {
    Jet1 a, b, c;  // canonicalized row
    Jet1 rn2;      // a^2 + b^2
    Jet1 p0x, p0y;
};

RowJets rowJets(const LinearJets& L, const CreatorSolution& sol) {
    RowJets r;
    if (sol.rowIndex == 0) {
        r.a = L.a1; r.b = L.b1; r.c = L.lu;
    } else {
        r.a = L.a2; r.b = L.b2; r.c = L.lv;
    }
    if (sol.rowFlipped) {
        r.a = -r.a; r.b = -r.b; r.c = -r.c;
    }
    r.rn2 = r.a * r.a + r.b * r.b;
    r.p0x = -(r.c * r.a) / r.rn2;
    r.p0y = -(r.c * r.b) / r.rn2;
    return r;
}

CreatorJet assemble(const FrameEval& fe, const Jet2& lam2, const CreatorSolution& sol, Jet1 alpha,
                    Jet1 beta, Jet1 gamma) {
    CreatorJet cj;
    cj.alpha = alpha;
    cj.beta = beta;
    cj.gamma = gamma;
    cj.lambda = toJet1(lam2);
    cj.sol = sol;
    cj.nu = alpha * fe.s + beta * fe.t + gamma * fe.n;
    cj.f = toJet1(fe.x) + cj.lambda * cj.nu;
    cj.frame = fe;
    return cj;
}

}  // namespace

CreatorJet creatorJet(const SphereFamily& fam, double u0, double v0, const Branch& branch,
                      const Tolerances& tol) {
    const FrameEval fe = evalFrame(fam.fs, u0, v0, tol);
    const Jet2 lam2 = fam.lambda.jet2(u0, v0);
    InvariantData inv;
    {
        const InvariantJets ij = invariantJets(fe);
        inv.point = {u0, v0};
        inv.a1 = ij.a1.val; inv.b1 = ij.b1.val; inv.a2 = ij.a2.val; inv.b2 = ij.b2.val;
        inv.e1 = ij.e1.val; inv.f1 = ij.f1.val; inv.g1 = ij.g1.val;
        inv.e2 = ij.e2.val; inv.f2 = ij.f2.val; inv.g2 = ij.g2.val;
    }
    const CreatorSolution sol = solveCreator(inv, lam2, tol);
    const LinearJets L = linearJets(fe, lam2);

    if (sol.kind == SolutionKind::Empty)
        throw NotCreativeError("creative condition has no solution at (" + std::to_string(u0) + ", " +
                               std::to_string(v0) + ")");

    const auto cramer = [&](Jet1& alpha, Jet1& beta) {
        const Jet1 jF = L.a1 * L.b2 - L.a2 * L.b1;
        const Jet1 jA = L.a1 * L.lv - L.a2 * L.lu;
        const Jet1 jB = L.b1 * L.lv - L.b2 * L.lu;
        alpha = jB / jF;
        beta = -jA / jF;
    };

    switch (branch.kind) {
        case BranchKind::PlusGamma:
        case BranchKind::MinusGamma: {
            if (sol.kind == SolutionKind::UniqueOnCircle)
                throw BranchUnavailableError("gamma branches unavailable where the creator is unique");
            Jet1 alpha = Jet1::constant(0.0), beta = Jet1::constant(0.0);
            if (sol.kind == SolutionKind::TwoBranch) {
                cramer(alpha, beta);
            } else if (sol.kind == SolutionKind::Segment) {
                // Continuity extension across rank-1 loci: the min-norm
                // solution, which is the limit of the Cramer formula.
                const RowJets r = rowJets(L, sol);
                alpha = r.p0x;
                beta = r.p0y;
            }  // Disk: alpha = beta = 0 is a valid smooth selection.
            Jet1 g2 = 1.0 - alpha * alpha - beta * beta;
            Jet1 gamma;
            if (g2.val <= tol.eps_class) {
                gamma = Jet1::constant(0.0);
            } else {
                gamma = sqrt(g2);
            }
            if (branch.kind == BranchKind::MinusGamma) gamma = -gamma;
            return assemble(fe, lam2, sol, alpha, beta, gamma);
        }
        case BranchKind::UniqueGammaZero: {
            if (sol.kind != SolutionKind::UniqueOnCircle)
                throw BranchUnavailableError("unique branch requires a Sigma2/Sigma3 point");
            Jet1 alpha, beta;
            if (sol.rank == 2) {
                cramer(alpha, beta);
            } else {
                const RowJets r = rowJets(L, sol);
                alpha = r.p0x;
                beta = r.p0y;
            }
            return assemble(fe, lam2, sol, alpha, beta, Jet1::constant(0.0));
        }
        case BranchKind::Custom: {
            if (!branch.custom) throw BranchUnavailableError("custom branch missing closures");
            if (sol.kind == SolutionKind::Segment) {
                const RowJets r = rowJets(L, sol);
                const Jet1 rn = sqrt(r.rn2);
                const Jet1 c0 = -r.c / rn;                     // signed distance along the row normal
                const Jet1 rho = sqrt(1.0 - c0 * c0);          // chord half-length
                const Jet1 th = toJet1(branch.custom->theta(Jet2::varU(u0), Jet2::varV(v0)));
                const Jet1 wx = r.b / rn, wy = -r.a / rn;
                const Jet1 alpha = r.p0x + rho * sin(th) * wx;
                const Jet1 beta = r.p0y + rho * sin(th) * wy;
                const Jet1 gamma = rho * cos(th);
                return assemble(fe, lam2, sol, alpha, beta, gamma);
            }
            if (sol.kind == SolutionKind::Disk) {
                if (!branch.custom->phi)
                    throw BranchUnavailableError("Sigma5 custom branch requires both theta and phi");
                const Jet1 th = toJet1(branch.custom->theta(Jet2::varU(u0), Jet2::varV(v0)));
                const Jet1 ph = toJet1((*branch.custom->phi)(Jet2::varU(u0), Jet2::varV(v0)));
                const Jet1 alpha = sin(ph) * cos(th);
                const Jet1 beta = sin(ph) * sin(th);
                const Jet1 gamma = cos(ph);
                return assemble(fe, lam2, sol, alpha, beta, gamma);
            }
            throw BranchUnavailableError("custom branches require Sigma4/Sigma5 points");
        }
    }
    throw Error("unreachable branch kind");
}

CreatorJet gammaZeroCreatorJet(const SphereFamily& fam, double u0, double v0, const Tolerances& tol) {
    const FrameEval fe = evalFrame(fam.fs, u0, v0, tol);
    const Jet2 lam2 = fam.lambda.jet2(u0, v0);
    InvariantData inv;
    {
        const InvariantJets ij = invariantJets(fe);
        inv.a1 = ij.a1.val; inv.b1 = ij.b1.val; inv.a2 = ij.a2.val; inv.b2 = ij.b2.val;
    }
    const CreatorSolution sol = solveCreator(inv, lam2, tol);
    const LinearJets L = linearJets(fe, lam2);
    Jet1 alpha = Jet1::constant(0.0), beta = Jet1::constant(0.0);
    if (sol.rank == 2) {
        const Jet1 jF = L.a1 * L.b2 - L.a2 * L.b1;
        alpha = (L.b1 * L.lv - L.b2 * L.lu) / jF;
        beta = -(L.a1 * L.lv - L.a2 * L.lu) / jF;
    } else if (sol.rank == 1) {
        const RowJets r = rowJets(L, sol);
        alpha = r.p0x;
        beta = r.p0y;
    }
    return assemble(fe, lam2, sol, alpha, beta, Jet1::constant(0.0));
}

EnvelopePoint envelopeAt(const SphereFamily& fam, double u0, double v0, const Branch& branch,
                         const Tolerances& tol) {
    const CreatorJet cj = creatorJet(fam, u0, v0, branch, tol);
    return {value(cj.f), value(cj.nu)};
}

ResidualReport verifyEnvelope(const EnvelopeCandidate& candidate, const SphereFamily& fam,
                              const GridSpec& grid, const Tolerances& tol) {
    ResidualReport rep;
    const bool sampled = std::holds_alternative<SampledMap>(candidate);
    rep.tolUsed = sampled ? 1e-6 : tol.eps_residual;
    const double h = 1e-5;

    // Per-row residual maxima; rows run in parallel (candidates must be
    // reentrant) and reduce exactly, since max carries no rounding.
    struct RowAcc {
        double on = 0, tu = 0, tv = 0, scaled = 0;
        std::size_t checked = 0, fails = 0;
    };
    std::vector<RowAcc> acc(grid.nv);

    parallelForRows(grid.nv, [&](std::size_t j) {
        RowAcc& a = acc[j];
        const double v = grid.vAt(fam.fs.domain, j);
        for (std::size_t i = 0; i < grid.nu; ++i) {
            const double u = grid.uAt(fam.fs.domain, i);
            if (fam.fs.domain.excluded(u, v, tol)) continue;

            Vec3 fval, fu, fv;
            if (const VecExpr* ve = std::get_if<VecExpr>(&candidate)) {
                const Vec3j1 fj = ve->jet1(u, v);
                fval = value(fj);
                fu = duValue(fj);
                fv = dvValue(fj);
            } else if (const Branch* br = std::get_if<Branch>(&candidate)) {
                const CreatorJet cj = creatorJet(fam, u, v, *br, tol);
                fval = value(cj.f);
                fu = duValue(cj.f);
                fv = dvValue(cj.f);
            } else {
                const SampledMap& m = std::get<SampledMap>(candidate);
                fval = m(u, v);
                fu = (m(u + h, v) - m(u - h, v)) / (2.0 * h);
                fv = (m(u, v + h) - m(u, v - h)) / (2.0 * h);
            }

            const Vec3 x = fam.fs.x.value(u, v);
            const double lam = fam.lambda.value(u, v);
            const Vec3 d = fval - x;
            const double rOn = std::abs(dot(d, d) - lam * lam);
            const double rU = std::abs(dot(fu, d));
            const double rV = std::abs(dot(fv, d));

            a.on = std::max(a.on, rOn);
            a.tu = std::max(a.tu, rU);
            a.tv = std::max(a.tv, rV);
            const double sOn = rOn / (lam * lam);
            const double sU = rU / (1.0 + norm(fu) * lam);
            const double sV = rV / (1.0 + norm(fv) * lam);
            a.scaled = std::max({a.scaled, sOn, sU, sV});
            if (sOn > rep.tolUsed) ++a.fails;
            ++a.checked;
        }
    });

    std::size_t onSphereFails = 0;
    for (const RowAcc& a : acc) {
        rep.maxOnSphere = std::max(rep.maxOnSphere, a.on);
        rep.maxTanU = std::max(rep.maxTanU, a.tu);
        rep.maxTanV = std::max(rep.maxTanV, a.tv);
        rep.maxScaled = std::max(rep.maxScaled, a.scaled);
        rep.checked += a.checked;
        onSphereFails += a.fails;
    }
    rep.fracOnSphereFail = rep.checked ? double(onSphereFails) / double(rep.checked) : 0.0;
    rep.pass = rep.checked > 0 && rep.maxScaled <= rep.tolUsed;
    return rep;
}

const char* countName(CountKind k) {
    switch (k) {
        case CountKind::One: return "One";
        case CountKind::Two: return "Two";
        case CountKind::Uncountable: return "Uncountable";
        case CountKind::NotCreative: return "NotCreative";
        case CountKind::Undetermined: return "Undetermined";
    }
    return "?";
}

CountKind decideCount(const GridClassification& evidence) {
    if (evidence.anyEmpty) return CountKind::NotCreative;
    if (evidence.denseS2 || evidence.denseS3) return CountKind::One;
    if (evidence.denseS1) return CountKind::Two;
    if (!evidence.denseS123 && evidence.openWitnessS45) return CountKind::Uncountable;
    return CountKind::Undetermined;
}

EnvelopeCountResult envelopeCount(const SphereFamily& fam, const GridSpec& grid, const Tolerances& tol) {
    EnvelopeCountResult r;
    r.evidence = classifyGrid(fam, grid, tol);
    r.kind = decideCount(r.evidence);
    return r;
}

EnvelopeFrame envelopeFrame(const SphereFamily& fam, const Branch& branch, double u0, double v0,
                            const Tolerances& tol) {
    const CreatorJet cj = creatorJet(fam, u0, v0, branch, tol);
    EnvelopeFrame ef;
    ef.f = cj.f;
    ef.nu = cj.nu;
    if (branch.kind == BranchKind::UniqueGammaZero || cj.gamma.val == 0.0) {
        ef.omega = cj.frame.n;
    } else {
        const Jet1 den2 = cj.gamma * cj.gamma + cj.alpha * cj.alpha;
        if (den2.val <= tol.eps_zero)
            throw IllDefinedOmegaError("gamma^2 + alpha^2 vanishes; omega undefined");
        const Jet1 den = sqrt(den2);
        ef.omega = (-cj.gamma * cj.frame.s + cj.alpha * cj.frame.n) / den;
    }
    ef.mu = cross(ef.nu, ef.omega);

    const Vec3 om = value(ef.omega), mu = value(ef.mu);
    ef.af1 = dot(duValue(ef.f), om);
    ef.bf1 = dot(duValue(ef.f), mu);
    ef.af2 = dot(dvValue(ef.f), om);
    ef.bf2 = dot(dvValue(ef.f), mu);
    ef.ef1 = dot(duValue(ef.nu), om);
    ef.ff1 = dot(duValue(ef.nu), mu);
    ef.gf1 = dot(duValue(ef.omega), mu);
    ef.ef2 = dot(dvValue(ef.nu), om);
    ef.ff2 = dot(dvValue(ef.nu), mu);
    ef.gf2 = dot(dvValue(ef.omega), mu);
    return ef;
}

WitnessResult multiplicityWitness(const SphereFamily& fam, Vec2 point, double radius,
                                  const GridSpec& grid, const Tolerances& tol, double epsilon) {
    // The perturbation needs an open Sigma4/Sigma5 ball to live in.
    auto inS45 = [&](double u, double v) {
        if (fam.fs.domain.excluded(u, v, tol)) return false;
        const CreatorSolution s = solveCreatorAt(fam, u, v, tol);
        return s.kind == SolutionKind::Segment || s.kind == SolutionKind::Disk;
    };
    if (!inS45(point.x, point.y))
        throw NoOpenNeighborhoodError("witness point is not a Sigma4/Sigma5 point");
    for (int k = 0; k < 8; ++k) {
        const double ang = 2.0 * 3.14159265358979323846 * k / 8.0;
        if (!inS45(point.x + radius * std::cos(ang), point.y + radius * std::sin(ang)))
            throw NoOpenNeighborhoodError("radius-r ball leaves the Sigma4/Sigma5 region");
    }
    const CreatorSolution sol = solveCreatorAt(fam, point.x, point.y, tol);

    WitnessResult w;
    w.point = point;
    w.radius = radius;
    w.epsilon = epsilon;

    const double theta0 = 0.0;
    const double cx = point.x, cy = point.y, r2 = radius * radius;
    JetFn bumped = [=](const Jet2& u, const Jet2& v) {
        const Jet2 du = u - cx, dv = v - cy;
        const Jet2 rho2 = (du * du + dv * dv) / r2;
        if (rho2.val >= 1.0 - 1e-9) return Jet2::constant(theta0);
        return theta0 + epsilon * exp(1.0 - 1.0 / (1.0 - rho2));
    };

    if (sol.kind == SolutionKind::Disk) {
        const JetFn phi0 = jetFnConstant(1.0);  // away from the poles so theta moves nu
        w.base = Branch::customThetaPhi(jetFnConstant(theta0), phi0);
        w.perturbed = Branch::customThetaPhi(bumped, phi0);
    } else {
        w.base = Branch::customTheta(jetFnConstant(theta0));
        w.perturbed = Branch::customTheta(bumped);
    }

    w.baseReport = verifyEnvelope(w.base, fam, grid, tol);
    w.perturbedReport = verifyEnvelope(w.perturbed, fam, grid, tol);
    const Vec3 n0 = envelopeAt(fam, point.x, point.y, w.base, tol).nu;
    const Vec3 n1 = envelopeAt(fam, point.x, point.y, w.perturbed, tol).nu;
    w.separation = norm(n1 - n0);
    return w;
}

}  // namespace envtool
