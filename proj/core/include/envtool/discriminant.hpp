#pragma once

#include <string>
#include <vector>

#include "envtool/envelope.hpp"

namespace envtool {

// Residuals of F(p, u, v) = |p - x(u,v)|^2 - lambda(u,v)^2 and its two
// parameter derivatives; the brute-force membership oracle for the
// discriminant set {F = F_u = F_v = 0}.
struct OracleResiduals {
    double F = 0, Fu = 0, Fv = 0;
};

OracleResiduals residualOracle(const Vec3& p, const SphereFamily& fam, double u0, double v0);

// The circle C_(x,lambda) cut out of the sphere at a Sigma4 point by the
// rank-1 constraint nu . axis = offset.
struct CircleData {
    Vec2 at;
    Vec3 center;
    double radius = 0.0;
    Vec3 axis;       // unit vector in the (s,t) plane
    double offset = 0.0;  // in (-1, 1) on Sigma4
    std::vector<Vec3> points;
};

CircleData circleAt(const SphereFamily& fam, double u0, double v0, std::size_t m,
                    const Tolerances& tol = {});

// Analytic distance from a point to the circle.
double distanceToCircle(const Vec3& p, const CircleData& c);

struct DPoint {
    Vec3 p;
    Vec2 at;  // generating parameter
    OracleResiduals res;
};

struct DComponent {
    enum class Kind { EnvelopeSheet, Circle, Sphere } kind = Kind::EnvelopeSheet;
    std::string tag;
    std::vector<DPoint> points;
    // circle / sphere metadata
    Vec3 center;
    double radius = 0.0;
    Vec3 axis;
    double offset = 0.0;
};

// Sampled decomposition of the discriminant set: envelope sheets on
// Sigma1/Sigma2/Sigma3 samples, one circle per distinct Sigma4 circle, one
// sphere (Fibonacci-lattice sampled) per distinct Sigma5 sphere. Every
// emitted point is run through the residual oracle.
struct DiscriminantSample {
    std::vector<DComponent> components;
    double maxF = 0, maxFu = 0, maxFv = 0;
    std::size_t totalPoints = 0;
    bool anyNotCreative = false;
};

DiscriminantSample decomposeD(const SphereFamily& fam, const GridSpec& grid, std::size_t m,
                              const Tolerances& tol = {});

// Newton iteration on (F_u, F_v) = 0 at fixed p from a starting parameter;
// the completeness check that emitted points really sit in the set.
struct ProjectResult {
    double u = 0, v = 0;
    OracleResiduals res;
    int iterations = 0;
    bool converged = false;
};

ProjectResult refineToD(const Vec3& p, const SphereFamily& fam, double u0, double v0,
                        int maxIter = 50);

}  // namespace envtool
