#include "envtool/frame.hpp"

#include <cmath>
#include <string>

namespace envtool {

namespace {

struct FrameJ1 {
    Vec3j1 n, s, t;
};

// First-order frame at one point: explicit expressions when present,
// otherwise derived from x, with the optional rotation applied on top.
FrameJ1 frameJ1At(const FramedSurfaceSpec& fs, double u, double v, const Tolerances& tol) {
    FrameJ1 f;
    if (fs.n && fs.s) {
        f.n = fs.n->jet1(u, v);
        f.s = fs.s->jet1(u, v);
    } else {
        const Vec3j2 x2 = fs.x.jet2(u, v);
        const Vec3j1 xu = derivU(x2), xv = derivV(x2);
        const Vec3j1 c = cross(xu, xv);
        const double cn = norm(value(c));
        if (nearZero(cn, norm(value(xu)) * norm(value(xv)), tol))
            throw SingularPointError("cannot derive frame at a singular point of x", u, v);
        f.n = c / norm(c);
        if (fs.n) f.n = fs.n->jet1(u, v);
        f.s = fs.s ? fs.s->jet1(u, v) : xu / norm(xu);
    }
    f.t = cross(f.n, f.s);
    if (fs.rotation) {
        const Jet1 th = fs.rotation->jet1(u, v);
        const Jet1 c = cos(th), s = sin(th);
        const Vec3j1 sNew = c * f.s - s * f.t;
        const Vec3j1 tNew = s * f.s + c * f.t;
        f.s = sNew;
        f.t = tNew;
    }
    return f;
}

void checkFramedAxioms(const FrameEval& fe, const Tolerances& tol, double u, double v) {
    const Vec3 nv3 = value(fe.n), sv3 = value(fe.s);
    const Vec3 xuv = value(fe.xu), xvv = value(fe.xv);
    const double r1 = std::abs(dot(nv3, nv3) - 1.0);
    const double r2 = std::abs(dot(sv3, sv3) - 1.0);
    const double r3 = std::abs(dot(nv3, sv3));
    const double r4 = std::abs(dot(xuv, nv3));
    const double r5 = std::abs(dot(xvv, nv3));
    const double e = tol.eps_residual;
    if (r1 > e * 2.0 || r2 > e * 2.0 || r3 > e * 2.0 || r4 > e * (1.0 + norm(xuv)) ||
        r5 > e * (1.0 + norm(xvv))) {
        throw FramedAxiomError("framed-surface axioms violated at (" + std::to_string(u) + ", " +
                               std::to_string(v) + "): |n|^2-1=" + std::to_string(r1) +
                               " |s|^2-1=" + std::to_string(r2) + " n.s=" + std::to_string(r3) +
                               " xu.n=" + std::to_string(r4) + " xv.n=" + std::to_string(r5));
    }
}

}  // namespace

std::pair<Vec3, Vec3> deriveFrame(const VecExpr& x, double u0, double v0, const Tolerances& tol) {
    const Vec3j1 xj = x.jet1(u0, v0);
    const Vec3 xu = duValue(xj), xv = dvValue(xj);
    const Vec3 c = cross(xu, xv);
    const double cn = norm(c);
    if (nearZero(cn, norm(xu) * norm(xv), tol))
        throw SingularPointError("x_u x x_v vanishes; no regular frame at this point", u0, v0);
    return {c / cn, xu / norm(xu)};
}

FrameEval evalFrame(const FramedSurfaceSpec& fs, double u0, double v0, const Tolerances& tol,
                    bool checkAxioms) {
    FrameEval fe;
    fe.u = u0;
    fe.v = v0;
    fe.x = fs.x.jet2(u0, v0);
    fe.xu = derivU(fe.x);
    fe.xv = derivV(fe.x);

    if (fs.n && fs.s) {
        // Fully explicit frame: exact second-order path.
        Vec3j2 n2 = fs.n->jet2(u0, v0);
        Vec3j2 s2 = fs.s->jet2(u0, v0);
        Vec3j2 t2 = cross(n2, s2);
        if (fs.rotation) {
            const Jet2 th = fs.rotation->jet2(u0, v0);
            const Jet2 c = cos(th), s = sin(th);
            const Vec3j2 sNew = c * s2 - s * t2;
            const Vec3j2 tNew = s * s2 + c * t2;
            s2 = sNew;
            t2 = tNew;
        }
        fe.n = toJet1(n2);
        fe.s = toJet1(s2);
        fe.t = toJet1(t2);
        fe.nu = derivU(n2);
        fe.nv = derivV(n2);
        fe.su = derivU(s2);
        fe.sv = derivV(s2);
        fe.frameSecondOrderExact = true;
    } else {
        // Derived frame: first order is exact, second order of the frame is
        // filled by central differences of the first-order evaluation.
        const double h = 1e-5;
        const FrameJ1 c0 = frameJ1At(fs, u0, v0, tol);
        const FrameJ1 up = frameJ1At(fs, u0 + h, v0, tol);
        const FrameJ1 um = frameJ1At(fs, u0 - h, v0, tol);
        const FrameJ1 vp = frameJ1At(fs, u0, v0 + h, tol);
        const FrameJ1 vm = frameJ1At(fs, u0, v0 - h, tol);
        fe.n = c0.n;
        fe.s = c0.s;
        fe.t = c0.t;
        auto fill = [&](const Vec3j1& c, const Vec3j1& uP, const Vec3j1& uM, const Vec3j1& vP,
                        const Vec3j1& vM, Vec3j1& dU, Vec3j1& dV) {
            const Vec3 ju = duValue(c), jv = dvValue(c);
            const Vec3 juu = (duValue(uP) - duValue(uM)) / (2.0 * h);
            const Vec3 juv = (duValue(vP) - duValue(vM)) / (2.0 * h);
            const Vec3 jvv = (dvValue(vP) - dvValue(vM)) / (2.0 * h);
            dU = {Jet1{ju.x, juu.x, juv.x}, Jet1{ju.y, juu.y, juv.y}, Jet1{ju.z, juu.z, juv.z}};
            dV = {Jet1{jv.x, juv.x, jvv.x}, Jet1{jv.y, juv.y, jvv.y}, Jet1{jv.z, juv.z, jvv.z}};
        };
        fill(c0.n, up.n, um.n, vp.n, vm.n, fe.nu, fe.nv);
        fill(c0.s, up.s, um.s, vp.s, vm.s, fe.su, fe.sv);
        fe.frameSecondOrderExact = false;
    }

    if (checkAxioms) checkFramedAxioms(fe, tol, u0, v0);
    return fe;
}

InvariantJets invariantJets(const FrameEval& fe) {
    InvariantJets j;
    j.a1 = dot(fe.xu, fe.s);
    j.b1 = dot(fe.xu, fe.t);
    j.a2 = dot(fe.xv, fe.s);
    j.b2 = dot(fe.xv, fe.t);
    // t = n x s keeps its jets consistent with nu/su, so g = s_u . t etc.
    j.e1 = dot(fe.nu, fe.s);
    j.f1 = dot(fe.nu, fe.t);
    j.g1 = dot(fe.su, fe.t);
    j.e2 = dot(fe.nv, fe.s);
    j.f2 = dot(fe.nv, fe.t);
    j.g2 = dot(fe.sv, fe.t);
    return j;
}

InvariantData basicInvariants(const FramedSurfaceSpec& fs, double u0, double v0, const Tolerances& tol) {
    const FrameEval fe = evalFrame(fs, u0, v0, tol);
    const InvariantJets j = invariantJets(fe);
    InvariantData d;
    d.point = {u0, v0};
    d.n = fe.n;
    d.s = fe.s;
    d.t = fe.t;
    d.a1 = j.a1.val;
    d.b1 = j.b1.val;
    d.a2 = j.a2.val;
    d.b2 = j.b2.val;
    d.e1 = j.e1.val;
    d.f1 = j.f1.val;
    d.g1 = j.g1.val;
    d.e2 = j.e2.val;
    d.f2 = j.f2.val;
    d.g2 = j.g2.val;
    return d;
}

std::array<double, 6> integrabilityResiduals(const FramedSurfaceSpec& fs, double u0, double v0,
                                             const Tolerances& tol, double h) {
    const InvariantData c = basicInvariants(fs, u0, v0, tol);
    const InvariantData pu = basicInvariants(fs, u0 + h, v0, tol);
    const InvariantData mu = basicInvariants(fs, u0 - h, v0, tol);
    const InvariantData pv = basicInvariants(fs, u0, v0 + h, tol);
    const InvariantData mv = basicInvariants(fs, u0, v0 - h, tol);
    const double inv2h = 1.0 / (2.0 * h);
    return integrabilityResidualsFromValues(
        c, (pv.a1 - mv.a1) * inv2h, (pu.a2 - mu.a2) * inv2h, (pv.b1 - mv.b1) * inv2h,
        (pu.b2 - mu.b2) * inv2h, (pv.e1 - mv.e1) * inv2h, (pu.e2 - mu.e2) * inv2h,
        (pv.f1 - mv.f1) * inv2h, (pu.f2 - mu.f2) * inv2h, (pv.g1 - mv.g1) * inv2h,
        (pu.g2 - mu.g2) * inv2h);
}

std::array<double, 6> integrabilityResidualsFromValues(const InvariantData& c, double a1v, double a2u,
                                                       double b1v, double b2u, double e1v, double e2u,
                                                       double f1v, double f2u, double g1v, double g2u) {
    std::array<double, 6> r{};
    r[0] = (a1v - c.b1 * c.g2) - (a2u - c.b2 * c.g1);
    r[1] = (b1v - c.a2 * c.g1) - (b2u - c.a1 * c.g2);
    r[2] = (c.a1 * c.e2 + c.b1 * c.f2) - (c.a2 * c.e1 + c.b2 * c.f1);
    r[3] = (e1v - c.f1 * c.g2) - (e2u - c.f2 * c.g1);
    r[4] = (f1v - c.e2 * c.g1) - (f2u - c.e1 * c.g2);
    r[5] = (g1v - c.e1 * c.f2) - (g2u - c.e2 * c.f1);
    return r;
}

FramedSurfaceSpec reparametrize(const FramedSurfaceSpec& fs, const Expr& phiU, const Expr& phiV,
                                const Domain& newDomain, const Tolerances& tol) {
    // Probe the Jacobian on a coarse grid of the new domain.
    const int steps = 9;
    for (int j = 0; j < steps; ++j) {
        for (int i = 0; i < steps; ++i) {
            const double p = newDomain.uMin + (newDomain.uMax - newDomain.uMin) * i / double(steps - 1);
            const double q = newDomain.vMin + (newDomain.vMax - newDomain.vMin) * j / double(steps - 1);
            if (newDomain.excluded(p, q, tol)) continue;
            const Jet1 a = phiU.jet1(p, q);
            const Jet1 b = phiV.jet1(p, q);
            const double det = a.du * b.dv - b.du * a.dv;
            const double scale = std::abs(a.du * b.dv) + std::abs(b.du * a.dv);
            if (nearZero(det, scale, tol))
                throw DegenerateJacobianError("parameter change has a degenerate Jacobian near (" +
                                              std::to_string(p) + ", " + std::to_string(q) + ")");
        }
    }
    FramedSurfaceSpec out;
    out.x = fs.x.substitute(phiU, phiV);
    if (fs.n) out.n = fs.n->substitute(phiU, phiV);
    if (fs.s) out.s = fs.s->substitute(phiU, phiV);
    if (fs.rotation) out.rotation = fs.rotation->substitute(phiU, phiV);
    out.domain = newDomain;
    return out;
}

SphereFamily reparametrize(const SphereFamily& fam, const Expr& phiU, const Expr& phiV,
                           const Domain& newDomain, const Tolerances& tol) {
    SphereFamily out;
    out.fs = reparametrize(fam.fs, phiU, phiV, newDomain, tol);
    out.lambda = fam.lambda.substitute(phiU, phiV);
    return out;
}

FramedSurfaceSpec rotateFrame(const FramedSurfaceSpec& fs, const Expr& theta) {
    FramedSurfaceSpec out = fs;
    out.rotation = fs.rotation ? exprAdd(*fs.rotation, theta) : theta;
    return out;
}

}  // namespace envtool
