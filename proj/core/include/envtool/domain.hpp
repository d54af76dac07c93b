#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "envtool/errors.hpp"
#include "envtool/tolerances.hpp"

namespace envtool {

// One comparison against u or v. '=' and "!=" use the scale-relative
// eps_zero band so excluded loci catch the grid points they name.
struct ExcludeCond {
    char var = 'u';  // 'u' or 'v'
    enum Op { LT, LE, GT, GE, EQ, NE } op = EQ;
    double value = 0.0;

    bool holds(double u, double v, const Tolerances& tol) const {
        const double q = (var == 'u') ? u : v;
        switch (op) {
            case LT: return q < value;
            case LE: return q <= value;
            case GT: return q > value;
            case GE: return q >= value;
            case EQ: return nearZero(q - value, std::abs(value), tol);
            case NE: return !nearZero(q - value, std::abs(value), tol);
        }
        return false;
    }
};

// Conjunction of conditions; a point is excluded if any clause matches.
using ExcludeClause = std::vector<ExcludeCond>;

// Rectangle [u_min,u_max] x [v_min,v_max] minus the described loci.
struct Domain {
    double uMin = -1.0, uMax = 1.0;
    double vMin = -1.0, vMax = 1.0;
    std::vector<ExcludeClause> exclusions;

    bool excluded(double u, double v, const Tolerances& tol) const {
        for (const auto& clause : exclusions) {
            bool all = !clause.empty();
            for (const auto& c : clause)
                if (!c.holds(u, v, tol)) { all = false; break; }
            if (all) return true;
        }
        return false;
    }

    bool contains(double u, double v, const Tolerances& tol) const {
        return u >= uMin && u <= uMax && v >= vMin && v <= vMax && !excluded(u, v, tol);
    }
};

// Parses clause lists like "u=0 & v=0; v<=0".
std::vector<ExcludeClause> parseExclusions(const std::string& text);
std::string printExclusions(const std::vector<ExcludeClause>& ex);

// Uniform sampling grid including both endpoints. Row-major iteration order
// is v outer (rows), u inner (columns).
struct GridSpec {
    std::size_t nu = 41, nv = 41;

    double uAt(const Domain& d, std::size_t i) const {
        return nu == 1 ? d.uMin : d.uMin + (d.uMax - d.uMin) * static_cast<double>(i) / static_cast<double>(nu - 1);
    }
    double vAt(const Domain& d, std::size_t j) const {
        return nv == 1 ? d.vMin : d.vMin + (d.vMax - d.vMin) * static_cast<double>(j) / static_cast<double>(nv - 1);
    }
    std::size_t index(std::size_t i, std::size_t j) const { return j * nu + i; }
    std::size_t size() const { return nu * nv; }
};

}  // namespace envtool
