#include "envtool/creative.hpp"

#include <algorithm>
#include <cmath>

#include "envtool/parallel.hpp"

namespace envtool {

Jays jays(const InvariantData& inv, const Jet2& lambda) {
    Jays j;
    j.jF = inv.a1 * inv.b2 - inv.a2 * inv.b1;
    j.jA = inv.a1 * lambda.dv - inv.a2 * lambda.du;
    j.jB = inv.b1 * lambda.dv - inv.b2 * lambda.du;
    return j;
}

const char* sigmaName(Sigma s) {
    switch (s) {
        case Sigma::S1: return "Sigma1";
        case Sigma::S2: return "Sigma2";
        case Sigma::S3: return "Sigma3";
        case Sigma::S4: return "Sigma4";
        case Sigma::S5: return "Sigma5";
        case Sigma::NotCreative: return "NotCreative";
        case Sigma::Ambiguous: return "Ambiguous";
        case Sigma::Excluded: return "Excluded";
    }
    return "?";
}

CreatorSolution solveCreator(const InvariantData& inv, const Jet2& lambda, const Tolerances& tol) {
    CreatorSolution out;
    out.jays = jays(inv, lambda);
    const double lu = lambda.du, lv = lambda.dv;
    const double s = std::max({std::abs(inv.a1), std::abs(inv.b1), std::abs(inv.a2), std::abs(inv.b2), 1.0});
    const double sl = std::max({std::abs(lu), std::abs(lv), 1.0});
    const double r1n = std::hypot(inv.a1, inv.b1);
    const double r2n = std::hypot(inv.a2, inv.b2);

    if (!nearZero(out.jays.jF, s, tol)) {
        // Rank 2: Cramer gives the unique solution of the linear part.
        out.rank = 2;
        out.alpha = out.jays.jB / out.jays.jF;
        out.beta = -out.jays.jA / out.jays.jF;
        const double d = out.alpha * out.alpha + out.beta * out.beta - 1.0;
        if (std::abs(d) <= tol.eps_class) {
            out.kind = SolutionKind::UniqueOnCircle;
            out.sigma = Sigma::S2;
        } else if (d < 0.0) {
            out.kind = SolutionKind::TwoBranch;
            out.sigma = Sigma::S1;
        } else {
            out.kind = SolutionKind::Empty;
            out.sigma = Sigma::NotCreative;
        }
        // Barely nonzero determinant: the rank call itself sits on the
        // boundary band, so surface it instead of committing.
        if (std::abs(out.jays.jF) <= tol.eps_class * (1.0 + s)) out.sigma = Sigma::Ambiguous;
        return out;
    }

    if (nearZero(r1n, s, tol) && nearZero(r2n, s, tol)) {
        // Rank 0: solvable iff the radius is critical here.
        out.rank = 0;
        if (nearZero(lu, 1.0, tol) && nearZero(lv, 1.0, tol)) {
            out.kind = SolutionKind::Disk;
            out.sigma = Sigma::S5;
        } else {
            out.kind = SolutionKind::Empty;
            out.sigma = Sigma::NotCreative;
        }
        return out;
    }

    // Rank 1: the two equations must be proportional including the lambda
    // column, which is exactly J_a = J_b = 0.
    out.rank = 1;
    if (!(nearZero(out.jays.jA, s * sl, tol) && nearZero(out.jays.jB, s * sl, tol))) {
        out.kind = SolutionKind::Empty;
        out.sigma = Sigma::NotCreative;
        return out;
    }

    double a, b, c;
    if (r1n >= r2n) {
        a = inv.a1; b = inv.b1; c = lu;
        out.rowIndex = 0;
    } else {
        a = inv.a2; b = inv.b2; c = lv;
        out.rowIndex = 1;
    }
    // Deterministic orientation: first nonzero of (a, b) positive.
    const double rn = std::hypot(a, b);
    const bool flip = (std::abs(a) > tol.eps_zero * rn) ? (a < 0.0) : (b < 0.0);
    if (flip) { a = -a; b = -b; c = -c; }
    out.rowFlipped = flip;
    out.rowA = a;
    out.rowB = b;
    out.rowC = c;

    const double d0 = std::abs(c) / rn;
    const double p0x = -c * a / (rn * rn);
    const double p0y = -c * b / (rn * rn);
    out.alpha = p0x;
    out.beta = p0y;

    if (std::abs(d0 - 1.0) <= tol.eps_class) {
        out.kind = SolutionKind::UniqueOnCircle;
        // Cross-check the printed componentwise condition
        // (a1^2+b1^2, a2^2+b2^2) = (lu^2, lv^2) against line tangency.
        const double band = tol.eps_class * (1.0 + s * s + sl * sl);
        const bool comp1 = std::abs(inv.a1 * inv.a1 + inv.b1 * inv.b1 - lu * lu) <= band;
        const bool comp2 = std::abs(inv.a2 * inv.a2 + inv.b2 * inv.b2 - lv * lv) <= band;
        out.sigma = (comp1 && comp2) ? Sigma::S3 : Sigma::Ambiguous;
    } else if (d0 < 1.0) {
        out.kind = SolutionKind::Segment;
        const double band = tol.eps_class * (1.0 + s * s + sl * sl);
        const bool comp = (inv.a1 * inv.a1 + inv.b1 * inv.b1 > lu * lu + band) ||
                          (inv.a2 * inv.a2 + inv.b2 * inv.b2 > lv * lv + band);
        out.sigma = comp ? Sigma::S4 : Sigma::Ambiguous;
        const double rho = std::sqrt(std::max(0.0, 1.0 - d0 * d0));
        const double wx = b / rn, wy = -a / rn;
        Vec2 e1{p0x - rho * wx, p0y - rho * wy};
        Vec2 e2{p0x + rho * wx, p0y + rho * wy};
        if (e2.y < e1.y || (e2.y == e1.y && e2.x < e1.x)) std::swap(e1, e2);
        out.segment = std::array<Vec2, 2>{e1, e2};
    } else {
        out.kind = SolutionKind::Empty;
        out.sigma = Sigma::NotCreative;
    }
    if (std::max(r1n, r2n) <= tol.eps_class * (1.0 + s)) out.sigma = Sigma::Ambiguous;
    return out;
}

CreatorSolution solveCreatorAt(const SphereFamily& fam, double u0, double v0, const Tolerances& tol) {
    const InvariantData inv = basicInvariants(fam.fs, u0, v0, tol);
    const Jet2 lam = fam.lambda.jet2(u0, v0);
    return solveCreator(inv, lam, tol);
}

GridClassification classifyGrid(const SphereFamily& fam, const GridSpec& grid, const Tolerances& tol) {
    GridClassification g;
    g.grid = grid;
    g.domain = fam.fs.domain;
    g.points.resize(grid.size());
    parallelForRows(grid.nv, [&](std::size_t j) {
        const double v = grid.vAt(g.domain, j);
        for (std::size_t i = 0; i < grid.nu; ++i) {
            const double u = grid.uAt(g.domain, i);
            PointClass& pc = g.points[grid.index(i, j)];
            if (g.domain.excluded(u, v, tol)) continue;
            const CreatorSolution sol = solveCreatorAt(fam, u, v, tol);
            pc.valid = true;
            pc.sigma = sol.sigma;
            pc.kind = sol.kind;
            pc.jF = sol.jays.jF;
            pc.jA = sol.jays.jA;
            pc.jB = sol.jays.jB;
            pc.alpha = sol.alpha;
            pc.beta = sol.beta;
        }
    });

    for (const auto& pc : g.points) {
        if (!pc.valid) continue;
        ++g.validCount;
        ++g.counts[static_cast<std::size_t>(pc.sigma)];
        if (pc.kind == SolutionKind::Empty) g.anyEmpty = true;
    }

    g.densityThreshold = 3.0 / double(std::min(grid.nu, grid.nv));
    auto dense = [&](std::initializer_list<Sigma> set) {
        if (g.validCount == 0) return false;
        std::size_t inside = g.counts[static_cast<std::size_t>(Sigma::Ambiguous)];
        for (Sigma s : set) inside += g.counts[static_cast<std::size_t>(s)];
        const double complement = double(g.validCount - inside) / double(g.validCount);
        return complement <= g.densityThreshold;
    };
    g.denseS1 = dense({Sigma::S1});
    g.denseS2 = dense({Sigma::S2});
    g.denseS3 = dense({Sigma::S3});
    g.denseS123 = dense({Sigma::S1, Sigma::S2, Sigma::S3});

    auto inS45 = [&](std::size_t i, std::size_t j) {
        const PointClass& pc = g.points[grid.index(i, j)];
        return pc.valid && (pc.sigma == Sigma::S4 || pc.sigma == Sigma::S5);
    };
    for (std::size_t j = 1; j + 1 < grid.nv && !g.openWitnessS45; ++j) {
        for (std::size_t i = 1; i + 1 < grid.nu; ++i) {
            bool all = true;
            for (std::size_t dj = 0; dj < 3 && all; ++dj)
                for (std::size_t di = 0; di < 3 && all; ++di)
                    all = inS45(i + di - 1, j + dj - 1);
            if (all) {
                g.openWitnessS45 = true;
                g.witnessPoint = Vec2{grid.uAt(g.domain, i), grid.vAt(g.domain, j)};
                break;
            }
        }
    }
    return g;
}

double prop26FromValues(const InvariantData& inv, double alpha, double beta, double alphaU,
                        double alphaV, double betaU, double betaV) {
    return alpha * (inv.b1 * inv.g2 - inv.b2 * inv.g1) + beta * (inv.g1 * inv.a2 - inv.g2 * inv.a1) +
           (inv.a1 * alphaV - inv.a2 * alphaU) + (inv.b1 * betaV - inv.b2 * betaU);
}

double prop26Residual(const SphereFamily& fam, double u0, double v0, const Tolerances& tol, double h) {
    const CreatorSolution c = solveCreatorAt(fam, u0, v0, tol);
    if (!(c.sigma == Sigma::S1 || c.sigma == Sigma::S2))
        throw NotApplicableError("identity requires a Sigma1 or Sigma2 interior point");
    auto rep = [&](double u, double v) {
        const CreatorSolution n = solveCreatorAt(fam, u, v, tol);
        if (n.rank != 2)
            throw NotApplicableError("identity requires rank-2 neighbors for the derivative stencil");
        return Vec2{n.alpha, n.beta};
    };
    const Vec2 pu = rep(u0 + h, v0), mu = rep(u0 - h, v0);
    const Vec2 pv = rep(u0, v0 + h), mv = rep(u0, v0 - h);
    const InvariantData inv = basicInvariants(fam.fs, u0, v0, tol);
    const double inv2h = 1.0 / (2.0 * h);
    return prop26FromValues(inv, c.alpha, c.beta, (pu.x - mu.x) * inv2h, (pv.x - mv.x) * inv2h,
                            (pu.y - mu.y) * inv2h, (pv.y - mv.y) * inv2h);
}

}  // namespace envtool
