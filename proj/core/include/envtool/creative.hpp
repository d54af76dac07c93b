#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "envtool/frame.hpp"

namespace envtool {

// The three 2x2 determinants governing the classification:
//   J_F = det A,  J_a = a1*lv - a2*lu,  J_b = b1*lv - b2*lu.
struct Jays {
    double jF = 0, jA = 0, jB = 0;
};

Jays jays(const InvariantData& inv, const Jet2& lambda);

enum class SolutionKind : std::uint8_t { UniqueOnCircle, TwoBranch, Segment, Disk, Empty };

enum class Sigma : std::uint8_t { S1, S2, S3, S4, S5, NotCreative, Ambiguous, Excluded };

const char* sigmaName(Sigma s);

// Per-point solution set of the creative condition in (alpha, beta, gamma).
struct CreatorSolution {
    SolutionKind kind = SolutionKind::Empty;
    Sigma sigma = Sigma::NotCreative;
    double alpha = 0.0, beta = 0.0;  // representative (min-norm solution)
    std::optional<std::array<Vec2, 2>> segment;  // chord endpoints, ordered by beta then alpha
    Jays jays;
    int rank = 0;
    // Canonicalized dominant row (a, b, c) of [A | lambda_grad] when rank <= 1;
    // the solution line is a*alpha + b*beta + c = 0.
    double rowA = 0.0, rowB = 0.0, rowC = 0.0;
    int rowIndex = -1;
    bool rowFlipped = false;
};

CreatorSolution solveCreator(const InvariantData& inv, const Jet2& lambda, const Tolerances& tol = {});

// Convenience: invariants + lambda jet at a point of the family.
CreatorSolution solveCreatorAt(const SphereFamily& fam, double u0, double v0, const Tolerances& tol = {});

struct PointClass {
    Sigma sigma = Sigma::Excluded;
    SolutionKind kind = SolutionKind::Empty;
    double jF = 0, jA = 0, jB = 0;
    double alpha = 0, beta = 0;
    bool valid = false;  // in-domain, non-excluded, evaluable
};

// Grid classification plus the density evidence envelopeCount consumes.
// Density is a grid heuristic: a set counts as dense when the non-ambiguous
// complement fraction is at most densityThreshold (~ measure-zero sets meet
// a k x k grid in O(k) points, so the threshold shrinks as the grid refines).
struct GridClassification {
    GridSpec grid;
    Domain domain;
    std::vector<PointClass> points;  // row-major, v outer
    std::size_t validCount = 0;
    std::array<std::size_t, 8> counts{};  // indexed by Sigma
    bool denseS1 = false, denseS2 = false, denseS3 = false, denseS123 = false;
    bool openWitnessS45 = false;
    std::optional<Vec2> witnessPoint;
    bool anyEmpty = false;
    double densityThreshold = 0.0;

    double fraction(Sigma s) const {
        return validCount ? double(counts[static_cast<std::size_t>(s)]) / double(validCount) : 0.0;
    }
};

GridClassification classifyGrid(const SphereFamily& fam, const GridSpec& grid, const Tolerances& tol = {});

// Left-hand side of the identity every creative family satisfies on smooth
// rank-2 regions:
//   alpha*det(b,g) + beta*det(g,a) + det(a, grad alpha) + det(b, grad beta) = 0.
double prop26FromValues(const InvariantData& inv, double alpha, double beta, double alphaU,
                        double alphaV, double betaU, double betaV);

// Same identity with (alpha, beta) from solveCreator and their partials by
// central differences of the representatives (step h). Throws
// NotApplicableError off Sigma1/Sigma2 points.
double prop26Residual(const SphereFamily& fam, double u0, double v0, const Tolerances& tol = {},
                      double h = 1e-5);

}  // namespace envtool
