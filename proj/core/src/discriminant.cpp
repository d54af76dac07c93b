#include "envtool/discriminant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

namespace envtool {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

OracleResiduals residualOracle(const Vec3& p, const SphereFamily& fam, double u0, double v0) {
    const Vec3j1 x = fam.fs.x.jet1(u0, v0);
    const Jet1 lam = fam.lambda.jet1(u0, v0);
    const Vec3 d = p - value(x);
    OracleResiduals r;
    r.F = dot(d, d) - lam.val * lam.val;
    r.Fu = -2.0 * dot(duValue(x), d) - 2.0 * lam.val * lam.du;
    r.Fv = -2.0 * dot(dvValue(x), d) - 2.0 * lam.val * lam.dv;
    return r;
}

CircleData circleAt(const SphereFamily& fam, double u0, double v0, std::size_t m,
                    const Tolerances& tol) {
    const CreatorSolution sol = solveCreatorAt(fam, u0, v0, tol);
    if (sol.kind != SolutionKind::Segment)
        throw NotApplicableError("circleAt requires a Sigma4 (segment) point");
    const FrameEval fe = evalFrame(fam.fs, u0, v0, tol);
    const double lam = fam.lambda.value(u0, v0);
    const double rn = std::hypot(sol.rowA, sol.rowB);
    const Vec3 s = value(fe.s), t = value(fe.t), n = value(fe.n);
    CircleData c;
    c.at = {u0, v0};
    c.center = value(toJet1(fe.x));
    c.radius = lam;
    c.axis = (sol.rowA * s + sol.rowB * t) / rn;
    c.offset = -sol.rowC / rn;
    if (std::abs(c.offset) > 1.0 + tol.eps_class)
        throw Error("inconsistent Sigma4 circle: |offset| > 1");
    const double rho = std::sqrt(std::max(0.0, 1.0 - c.offset * c.offset));
    const Vec3 q1 = (sol.rowB * s - sol.rowA * t) / rn;
    const Vec3 q2 = n;
    c.points.reserve(m);
    for (std::size_t j = 0; j < m; ++j) {
        const double th = 2.0 * kPi * double(j) / double(m);
        const Vec3 nu = c.offset * c.axis + rho * (std::sin(th) * q1 + std::cos(th) * q2);
        c.points.push_back(c.center + lam * nu);
    }
    return c;
}

double distanceToCircle(const Vec3& p, const CircleData& c) {
    const Vec3 d = p - (c.center + (c.radius * c.offset) * c.axis);
    const double axial = dot(d, c.axis);
    const Vec3 radial = d - axial * c.axis;
    const double circleRadius = c.radius * std::sqrt(std::max(0.0, 1.0 - c.offset * c.offset));
    return std::hypot(norm(radial) - circleRadius, axial);
}

namespace {

std::string geometryKey(const char* kind, const Vec3& center, double radius, const Vec3& axis,
                        double offset) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "%s|%.12e,%.12e,%.12e|%.12e|%.12e,%.12e,%.12e|%.12e", kind,
                  center.x, center.y, center.z, radius, axis.x, axis.y, axis.z, offset);
    return buf;
}

}  // namespace

DiscriminantSample decomposeD(const SphereFamily& fam, const GridSpec& grid, std::size_t m,
                              const Tolerances& tol) {
    DiscriminantSample out;
    DComponent plus{DComponent::Kind::EnvelopeSheet, "envelope_plus", {}, {}, 0, {}, 0};
    DComponent minus{DComponent::Kind::EnvelopeSheet, "envelope_minus", {}, {}, 0, {}, 0};
    DComponent unique{DComponent::Kind::EnvelopeSheet, "envelope_unique", {}, {}, 0, {}, 0};
    std::map<std::string, std::size_t> seen;  // geometry key -> component index
    std::vector<DComponent> extras;

    auto record = [&](DComponent& comp, const Vec3& p, double u, double v) {
        DPoint dp{p, {u, v}, residualOracle(p, fam, u, v)};
        out.maxF = std::max(out.maxF, std::abs(dp.res.F));
        out.maxFu = std::max(out.maxFu, std::abs(dp.res.Fu));
        out.maxFv = std::max(out.maxFv, std::abs(dp.res.Fv));
        ++out.totalPoints;
        comp.points.push_back(dp);
    };

    for (std::size_t j = 0; j < grid.nv; ++j) {
        const double v = grid.vAt(fam.fs.domain, j);
        for (std::size_t i = 0; i < grid.nu; ++i) {
            const double u = grid.uAt(fam.fs.domain, i);
            if (fam.fs.domain.excluded(u, v, tol)) continue;
            const CreatorSolution sol = solveCreatorAt(fam, u, v, tol);
            switch (sol.kind) {
                case SolutionKind::Empty:
                    out.anyNotCreative = true;
                    break;
                case SolutionKind::TwoBranch: {
                    record(plus, envelopeAt(fam, u, v, Branch::plusGamma(), tol).f, u, v);
                    record(minus, envelopeAt(fam, u, v, Branch::minusGamma(), tol).f, u, v);
                    break;
                }
                case SolutionKind::UniqueOnCircle: {
                    record(unique, envelopeAt(fam, u, v, Branch::uniqueGammaZero(), tol).f, u, v);
                    break;
                }
                case SolutionKind::Segment: {
                    // Branch continuations keep the envelope sheets connected
                    // across the rank-1 locus; the circle carries the rest.
                    record(plus, envelopeAt(fam, u, v, Branch::plusGamma(), tol).f, u, v);
                    record(minus, envelopeAt(fam, u, v, Branch::minusGamma(), tol).f, u, v);
                    CircleData c = circleAt(fam, u, v, m, tol);
                    const std::string key = geometryKey("C", c.center, c.radius, c.axis, c.offset);
                    if (seen.find(key) == seen.end()) {
                        DComponent comp;
                        comp.kind = DComponent::Kind::Circle;
                        char tag[48];
                        std::snprintf(tag, sizeof tag, "circle_%04zu", extras.size());
                        comp.tag = tag;
                        comp.center = c.center;
                        comp.radius = c.radius;
                        comp.axis = c.axis;
                        comp.offset = c.offset;
                        for (const Vec3& p : c.points) record(comp, p, u, v);
                        seen.emplace(key, extras.size());
                        extras.push_back(std::move(comp));
                    }
                    break;
                }
                case SolutionKind::Disk: {
                    const Vec3 center = fam.fs.x.value(u, v);
                    const double lam = fam.lambda.value(u, v);
                    const std::string key = geometryKey("S", center, lam, Vec3{0, 0, 0}, 0.0);
                    if (seen.find(key) == seen.end()) {
                        DComponent comp;
                        comp.kind = DComponent::Kind::Sphere;
                        char tag[48];
                        std::snprintf(tag, sizeof tag, "sphere_%04zu", extras.size());
                        comp.tag = tag;
                        comp.center = center;
                        comp.radius = lam;
                        // Deterministic low-discrepancy cover of the sphere.
                        const double golden = kPi * (3.0 - std::sqrt(5.0));
                        for (std::size_t k = 0; k < m; ++k) {
                            const double z = 1.0 - (2.0 * double(k) + 1.0) / double(m);
                            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                            const double ang = golden * double(k);
                            const Vec3 nu{r * std::cos(ang), r * std::sin(ang), z};
                            record(comp, center + lam * nu, u, v);
                        }
                        seen.emplace(key, extras.size());
                        extras.push_back(std::move(comp));
                    }
                    break;
                }
            }
        }
    }

    if (!plus.points.empty()) out.components.push_back(std::move(plus));
    if (!minus.points.empty()) out.components.push_back(std::move(minus));
    if (!unique.points.empty()) out.components.push_back(std::move(unique));
    for (auto& c : extras) out.components.push_back(std::move(c));
    return out;
}

ProjectResult refineToD(const Vec3& p, const SphereFamily& fam, double u0, double v0, int maxIter) {
    ProjectResult r;
    r.u = u0;
    r.v = v0;
    for (int it = 0; it < maxIter; ++it) {
        const Vec3j2 x2 = fam.fs.x.jet2(r.u, r.v);
        const Jet2 lam2 = fam.lambda.jet2(r.u, r.v);
        const Vec3j2 d{Jet2::constant(p.x) - x2.x, Jet2::constant(p.y) - x2.y,
                       Jet2::constant(p.z) - x2.z};
        const Jet2 F = dot(d, d) - lam2 * lam2;
        r.res = {F.val, F.du, F.dv};
        r.iterations = it;
        if (std::abs(F.du) < 1e-13 && std::abs(F.dv) < 1e-13) {
            r.converged = true;
            return r;
        }
        // Newton on the gradient; damp when the Hessian is rank-deficient
        // (families ignoring one parameter have an identically flat
        // direction with zero gradient, where any step component is noise).
        double h11 = F.duu, h12 = F.duv, h22 = F.dvv;
        const double hscale = std::abs(h11) + std::abs(h22) + std::abs(h12) + 1.0;
        double det = h11 * h22 - h12 * h12;
        if (std::abs(det) < 1e-12 * hscale * hscale) {
            const double mu = 1e-6 * hscale;
            h11 += mu;
            h22 += mu;
            det = h11 * h22 - h12 * h12;
            if (std::abs(det) < 1e-14) break;
        }
        double stepU = (h22 * F.du - h12 * F.dv) / det;
        double stepV = (h11 * F.dv - h12 * F.du) / det;
        const double cap = 0.5;
        stepU = std::clamp(stepU, -cap, cap);
        stepV = std::clamp(stepV, -cap, cap);
        r.u -= stepU;
        r.v -= stepV;
    }
    const OracleResiduals fin = residualOracle(p, fam, r.u, r.v);
    r.res = fin;
    r.converged = std::abs(fin.Fu) < 1e-10 && std::abs(fin.Fv) < 1e-10;
    return r;
}

}  // namespace envtool
