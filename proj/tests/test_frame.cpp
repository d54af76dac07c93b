#include <doctest.h>

#include <random>

#include "envtool/fixtures.hpp"
#include "envtool/frame.hpp"
#include "support/oracles.hpp"

using namespace envtool;

namespace {

SphereFamily fixture(const char* name) {
    const Fixture* fx = findFixture(name);
    REQUIRE(fx != nullptr);
    return makeFamily(*fx);
}

double randIn(std::mt19937& rng, double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(rng);
}

}  // namespace

TEST_CASE("deriveFrame: plane") {
    const VecExpr x = VecExpr::parse("(u, v, 0)");
    const auto [n, s] = deriveFrame(x, 0.3, -0.8);
    CHECK(n.x == doctest::Approx(0));
    CHECK(n.y == doctest::Approx(0));
    CHECK(n.z == doctest::Approx(1));
    CHECK(s.x == doctest::Approx(1));
    CHECK(s.y == doctest::Approx(0));
    CHECK(s.z == doctest::Approx(0));
}

TEST_CASE("deriveFrame: paraboloid at its critical point") {
    const VecExpr x = VecExpr::parse("(u, v, u^2+v^2)");
    const auto [n, s] = deriveFrame(x, 0.0, 0.0);
    CHECK(n.z == doctest::Approx(1));
    CHECK(s.x == doctest::Approx(1));
}

TEST_CASE("deriveFrame: singular point raises") {
    const VecExpr x = VecExpr::parse("(u^2, u^3, v)");
    CHECK_THROWS_AS(deriveFrame(x, 0.0, 0.5), SingularPointError);
}

TEST_CASE("basic invariants: parabolic cylinder matches the printed A-matrix") {
    const SphereFamily fam = fixture("parabolic-cylinder");
    std::mt19937 rng(5);
    for (int k = 0; k < 50; ++k) {
        const double u = randIn(rng, -1, 1), v = randIn(rng, -1, 1);
        const InvariantData d = basicInvariants(fam.fs, u, v);
        CHECK(std::abs(d.a1) <= 1e-12);
        CHECK(d.b1 == doctest::Approx(u * std::sqrt(9 * u * u + 4)).epsilon(1e-12));
        CHECK(d.a2 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(d.b2) <= 1e-12);
    }
}

TEST_CASE("basic invariants: plane has identity A and vanishing e,f,g") {
    const SphereFamily fam = fixture("translated-planes");
    const InvariantData d = basicInvariants(fam.fs, 0.4, -0.9);
    CHECK(d.a1 == doctest::Approx(1));
    CHECK(d.b1 == doctest::Approx(0));
    CHECK(d.a2 == doctest::Approx(0));
    CHECK(d.b2 == doctest::Approx(1));
    for (double q : {d.e1, d.f1, d.g1, d.e2, d.f2, d.g2}) CHECK(q == doctest::Approx(0));
}

TEST_CASE("basic invariants: axis family has A = [[0,0],[0,1]]") {
    const SphereFamily fam = fixture("axis-full");
    const InvariantData d = basicInvariants(fam.fs, 0.2, 1.5);
    CHECK(d.a1 == doctest::Approx(0));
    CHECK(d.b1 == doctest::Approx(0));
    CHECK(d.a2 == doctest::Approx(0));
    CHECK(d.b2 == doctest::Approx(1));
}

TEST_CASE("framed-surface axioms hold on fixtures and violations are caught") {
    for (const char* name : {"parabolic-cylinder", "cone-distance", "sphere-through-origin"}) {
        const SphereFamily fam = fixture(name);
        std::mt19937 rng(17);
        for (int k = 0; k < 100; ++k) {
            const double u = randIn(rng, fam.fs.domain.uMin, fam.fs.domain.uMax);
            const double v = randIn(rng, fam.fs.domain.vMin, fam.fs.domain.vMax);
            if (fam.fs.domain.excluded(u, v, Tolerances{})) continue;
            CHECK_NOTHROW(basicInvariants(fam.fs, u, v));
        }
    }
    // Non-unit n must be rejected.
    FramedSurfaceSpec broken;
    broken.x = VecExpr::parse("(u, v, 0)");
    broken.n = VecExpr::parse("(0, 0, 2)");
    broken.s = VecExpr::parse("(1, 0, 0)");
    CHECK_THROWS_AS(basicInvariants(broken, 0.1, 0.1), FramedAxiomError);
    // n not orthogonal to the tangent plane must be rejected.
    FramedSurfaceSpec skew;
    skew.x = VecExpr::parse("(u, v, 0)");
    skew.n = VecExpr::parse("(1, 0, 0)");
    skew.s = VecExpr::parse("(0, 0, 1)");
    CHECK_THROWS_AS(basicInvariants(skew, 0.1, 0.1), FramedAxiomError);
}

TEST_CASE("moving-frame tangent system reconstructs x_u and x_v") {
    for (const char* name : {"parabolic-cylinder", "sphere-through-origin", "axis-half"}) {
        const SphereFamily fam = fixture(name);
        std::mt19937 rng(29);
        for (int k = 0; k < 200; ++k) {
            const double u = randIn(rng, fam.fs.domain.uMin, fam.fs.domain.uMax);
            const double v = randIn(rng, fam.fs.domain.vMin, fam.fs.domain.vMax);
            if (fam.fs.domain.excluded(u, v, Tolerances{})) continue;
            const FrameEval fe = evalFrame(fam.fs, u, v);
            const InvariantJets ij = invariantJets(fe);
            const Vec3 xu = value(fe.xu);
            const Vec3 rec = ij.a1.val * value(fe.s) + ij.b1.val * value(fe.t);
            CHECK(norm(xu - rec) <= 1e-8 * (1.0 + norm(xu)));
            const Vec3 xv = value(fe.xv);
            const Vec3 rec2 = ij.a2.val * value(fe.s) + ij.b2.val * value(fe.t);
            CHECK(norm(xv - rec2) <= 1e-8 * (1.0 + norm(xv)));
            // Frame derivative system: n_u = e1 s + f1 t, s_u = -e1 n + g1 t.
            const Vec3 nu = duValue(fe.n);
            const Vec3 recN = ij.e1.val * value(fe.s) + ij.f1.val * value(fe.t);
            CHECK(norm(nu - recN) <= 1e-8 * (1.0 + norm(nu)));
            const Vec3 su = duValue(fe.s);
            const Vec3 recS = -ij.e1.val * value(fe.n) + ij.g1.val * value(fe.t);
            CHECK(norm(su - recS) <= 1e-8 * (1.0 + norm(su)));
        }
    }
}

TEST_CASE("integrability residuals vanish on genuine framed surfaces") {
    for (const char* name :
         {"parabolic-cylinder", "cone-distance", "axis-full", "sphere-through-origin"}) {
        const SphereFamily fam = fixture(name);
        std::mt19937 rng(31);
        for (int k = 0; k < 25; ++k) {
            // Stay a step away from the rim so the FD stencil stays inside.
            const double u = randIn(rng, fam.fs.domain.uMin + 0.01, fam.fs.domain.uMax - 0.01);
            const double v = randIn(rng, fam.fs.domain.vMin + 0.01, fam.fs.domain.vMax - 0.01);
            if (fam.fs.domain.excluded(u, v, Tolerances{})) continue;
            const auto r = integrabilityResiduals(fam.fs, u, v);
            for (double q : r) {
                CAPTURE(name);
                CHECK(std::abs(q) <= 1e-6);
            }
        }
    }
}

TEST_CASE("integrability: flat fixture residuals are zero to rounding") {
    const SphereFamily fam = fixture("translated-planes");
    const auto r = integrabilityResiduals(fam.fs, 0.25, -0.5);
    for (double q : r) CHECK(std::abs(q) <= 1e-12);
}

TEST_CASE("integrability: perturbing g1 breaks the first residual") {
    const SphereFamily fam = fixture("translated-planes");
    InvariantData d = basicInvariants(fam.fs, 0.2, 0.3);
    d.g1 += 0.1;  // b2 = 1 here, so the first compatibility residual picks up +0.1
    const auto r = integrabilityResidualsFromValues(d, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0);
    CHECK(std::abs(r[0]) == doctest::Approx(0.1));
}

TEST_CASE("reparametrize: identity leaves invariants unchanged") {
    const SphereFamily fam = fixture("parabolic-cylinder");
    const FramedSurfaceSpec composed =
        reparametrize(fam.fs, Expr::parse("u"), Expr::parse("v"), fam.fs.domain);
    const InvariantData a = basicInvariants(fam.fs, 0.3, 0.4);
    const InvariantData b = basicInvariants(composed, 0.3, 0.4);
    CHECK(a.a1 == doctest::Approx(b.a1));
    CHECK(a.b1 == doctest::Approx(b.b1));
    CHECK(a.g2 == doctest::Approx(b.g2));
}

TEST_CASE("reparametrize: swap of parameters swaps the A rows") {
    const SphereFamily fam = fixture("translated-planes");
    const FramedSurfaceSpec composed =
        reparametrize(fam.fs, Expr::parse("v"), Expr::parse("u"), fam.fs.domain);
    const InvariantData d = basicInvariants(composed, 0.3, 0.4);
    CHECK(d.a1 == doctest::Approx(0));
    CHECK(d.b1 == doctest::Approx(1));
    CHECK(d.a2 == doctest::Approx(1));
    CHECK(d.b2 == doctest::Approx(0));
}

TEST_CASE("reparametrize: u = 2p doubles the first row") {
    const SphereFamily fam = fixture("translated-planes");
    const FramedSurfaceSpec composed =
        reparametrize(fam.fs, Expr::parse("2*u"), Expr::parse("v"), fam.fs.domain);
    const InvariantData d = basicInvariants(composed, 0.3, 0.4);
    CHECK(d.a1 == doctest::Approx(2));
    CHECK(d.b1 == doctest::Approx(0));
    CHECK(d.a2 == doctest::Approx(0));
    CHECK(d.b2 == doctest::Approx(1));
}

TEST_CASE("reparametrize: degenerate Jacobian is rejected") {
    const SphereFamily fam = fixture("translated-planes");
    CHECK_THROWS_AS(reparametrize(fam.fs, Expr::parse("u+v"), Expr::parse("u+v"), fam.fs.domain),
                    DegenerateJacobianError);
}

TEST_CASE("parameter-change lemma on random affine maps") {
    const SphereFamily fam = fixture("sphere-through-origin");
    std::mt19937 rng(41);
    int done = 0;
    while (done < 40) {
        const double c11 = randIn(rng, -2, 2), c12 = randIn(rng, -2, 2);
        const double c21 = randIn(rng, -2, 2), c22 = randIn(rng, -2, 2);
        if (std::abs(c11 * c22 - c12 * c21) < 0.3) continue;
        char bufU[96], bufV[96];
        std::snprintf(bufU, sizeof bufU, "%.6f*u + %.6f*v", c11, c12);
        std::snprintf(bufV, sizeof bufV, "%.6f*u + %.6f*v", c21, c22);
        Domain nd;  // small box around a pulled-back interior point
        nd.uMin = -0.05;
        nd.uMax = 0.05;
        nd.vMin = -0.05;
        nd.vMax = 0.05;
        const Expr phiU = Expr::parse(std::string(bufU) + " + 0.4");
        const Expr phiV = Expr::parse(std::string(bufV) + " + 2.0");
        FramedSurfaceSpec composed;
        try {
            composed = reparametrize(fam.fs, phiU, phiV, nd);
        } catch (const DegenerateJacobianError&) {
            continue;
        }
        const double p = randIn(rng, nd.uMin, nd.uMax), q = randIn(rng, nd.vMin, nd.vMax);
        const double u = phiU.value(p, q), v = phiV.value(p, q);
        if (u < fam.fs.domain.uMin || u > fam.fs.domain.uMax || v < fam.fs.domain.vMin ||
            v > fam.fs.domain.vMax)
            continue;
        const InvariantData base = basicInvariants(fam.fs, u, v);
        const InvariantData comp = basicInvariants(composed, p, q);
        // Jphi rows: (u_p, v_p) and (u_q, v_q).
        const double up = c11, vp = c21, uq = c12, vq = c22;
        CHECK(oracles::closeRel(comp.a1, up * base.a1 + vp * base.a2, 1e-6));
        CHECK(oracles::closeRel(comp.b1, up * base.b1 + vp * base.b2, 1e-6));
        CHECK(oracles::closeRel(comp.a2, uq * base.a1 + vq * base.a2, 1e-6));
        CHECK(oracles::closeRel(comp.b2, uq * base.b1 + vq * base.b2, 1e-6));
        CHECK(oracles::closeRel(comp.e1, up * base.e1 + vp * base.e2, 1e-6));
        CHECK(oracles::closeRel(comp.f1, up * base.f1 + vp * base.f2, 1e-6));
        CHECK(oracles::closeRel(comp.g1, up * base.g1 + vp * base.g2, 1e-6));
        CHECK(oracles::closeRel(comp.e2, uq * base.e1 + vq * base.e2, 1e-6));
        CHECK(oracles::closeRel(comp.f2, uq * base.f1 + vq * base.f2, 1e-6));
        CHECK(oracles::closeRel(comp.g2, uq * base.g1 + vq * base.g2, 1e-6));
        ++done;
    }
}

TEST_CASE("rotateFrame: theta = 0 leaves everything in place") {
    const SphereFamily fam = fixture("parabolic-cylinder");
    const FramedSurfaceSpec rot = rotateFrame(fam.fs, Expr::parse("0"));
    const InvariantData a = basicInvariants(fam.fs, 0.5, -0.2);
    const InvariantData b = basicInvariants(rot, 0.5, -0.2);
    CHECK(a.a1 == doctest::Approx(b.a1).epsilon(1e-14));
    CHECK(a.g1 == doctest::Approx(b.g1).epsilon(1e-14));
}

TEST_CASE("rotateFrame: theta = pi/2 on the flat fixture") {
    const SphereFamily fam = fixture("translated-planes");
    const FramedSurfaceSpec rot = rotateFrame(fam.fs, Expr::parse("pi/2"));
    const InvariantData d = basicInvariants(rot, 0.3, 0.4);
    // A^theta = A R(theta) = [[0,1],[-1,0]].
    CHECK(std::abs(d.a1) <= 1e-12);
    CHECK(d.b1 == doctest::Approx(1.0));
    CHECK(d.a2 == doctest::Approx(-1.0));
    CHECK(std::abs(d.b2) <= 1e-12);
}

TEST_CASE("rotateFrame: theta = u shifts g1 by -1") {
    for (const char* name : {"translated-planes", "sphere-through-origin"}) {
        const SphereFamily fam = fixture(name);
        const FramedSurfaceSpec rot = rotateFrame(fam.fs, Expr::parse("u"));
        const InvariantData a = basicInvariants(fam.fs, 0.3, 1.0);
        const InvariantData b = basicInvariants(rot, 0.3, 1.0);
        CHECK(b.g1 == doctest::Approx(a.g1 - 1.0).epsilon(1e-10));
        CHECK(b.g2 == doctest::Approx(a.g2).epsilon(1e-10));
    }
}

TEST_CASE("rotation lemma on random angles") {
    const SphereFamily fam = fixture("sphere-through-origin");
    std::mt19937 rng(53);
    for (int k = 0; k < 40; ++k) {
        const double th = randIn(rng, -3, 3);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.8f", th);
        const FramedSurfaceSpec rot = rotateFrame(fam.fs, Expr::parse(buf));
        const double u = randIn(rng, -1.1, 1.1), v = randIn(rng, 0.1, 6.0);
        const InvariantData a = basicInvariants(fam.fs, u, v);
        const InvariantData b = basicInvariants(rot, u, v);
        const double c = std::cos(th), s = std::sin(th);
        CHECK(oracles::closeRel(b.a1, a.a1 * c - a.b1 * s, 1e-6));
        CHECK(oracles::closeRel(b.b1, a.a1 * s + a.b1 * c, 1e-6));
        CHECK(oracles::closeRel(b.a2, a.a2 * c - a.b2 * s, 1e-6));
        CHECK(oracles::closeRel(b.b2, a.a2 * s + a.b2 * c, 1e-6));
        CHECK(oracles::closeRel(b.e1, a.e1 * c - a.f1 * s, 1e-6));
        CHECK(oracles::closeRel(b.f1, a.e1 * s + a.f1 * c, 1e-6));
        CHECK(oracles::closeRel(b.g1, a.g1, 1e-6));  // constant theta: no shift
    }
}

TEST_CASE("rotations compose additively") {
    const SphereFamily fam = fixture("translated-planes");
    const FramedSurfaceSpec r1 = rotateFrame(rotateFrame(fam.fs, Expr::parse("0.3")), Expr::parse("0.4"));
    const FramedSurfaceSpec r2 = rotateFrame(fam.fs, Expr::parse("0.7"));
    const InvariantData a = basicInvariants(r1, 0.1, 0.2);
    const InvariantData b = basicInvariants(r2, 0.1, 0.2);
    CHECK(a.a1 == doctest::Approx(b.a1).epsilon(1e-14));
    CHECK(a.b2 == doctest::Approx(b.b2).epsilon(1e-14));
}

TEST_CASE("derived frames agree with explicit ones at regular points") {
    // Same sphere, frame derived from x only.
    FramedSurfaceSpec derived;
    derived.x = VecExpr::parse("(cos(u)*cos(v), cos(u)*sin(v), sin(u))");
    derived.domain.uMin = -1.2;
    derived.domain.uMax = 1.2;
    derived.domain.vMin = 0.1;
    derived.domain.vMax = 6.0;
    const InvariantData d = basicInvariants(derived, 0.4, 1.0);
    // s = x_u/|x_u| and |x_u| = 1, so a1 = 1, b1 = 0.
    CHECK(d.a1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(d.b1) <= 1e-9);
    // n is the outward (or inward) radial; e1 = n_u.s = +-a1.
    CHECK(std::abs(d.e1) == doctest::Approx(1.0).epsilon(1e-6));
}
