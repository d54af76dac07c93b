#include "envtool/fixtures.hpp"

namespace envtool {

const std::vector<Fixture>& fixtureRegistry() {
    static const std::vector<Fixture> reg = [] {
        std::vector<Fixture> v;
        auto dom = [](double u0, double u1, double v0, double v1, const std::string& ex = "") {
            Domain d;
            d.uMin = u0; d.uMax = u1; d.vMin = v0; d.vMax = v1;
            if (!ex.empty()) d.exclusions = parseExclusions(ex);
            return d;
        };
        v.push_back({"parabolic-cylinder",
                     "(u^2, u^3, v)",
                     "(-3*u/sqrt(9*u^2+4), 2/sqrt(9*u^2+4), 0)",
                     "(0, 0, 1)",
                     "1",
                     dom(-1, 1, -1, 1),
                     {101, 101}});
        v.push_back({"cone-distance",
                     "(u, v, 0)",
                     "(0, 0, 1)",
                     "(1, 0, 0)",
                     "sqrt(u^2+v^2)",
                     dom(-1, 1, -1, 1, "u=0 & v=0"),
                     {41, 41}});
        v.push_back({"translated-planes",
                     "(u, v, 0)",
                     "(0, 0, 1)",
                     "(1, 0, 0)",
                     "1",
                     dom(-1, 1, -1, 1),
                     {41, 41}});
        v.push_back({"fixed-sphere",
                     "(0, 0, 0)",
                     "(0, 0, 1)",
                     "(1, 0, 0)",
                     "1",
                     dom(-1, 1, -1, 1),
                     {21, 21}});
        v.push_back({"axis-full",
                     "(0, 0, v)",
                     "(1, 0, 0)",
                     "(0, 1, 0)",
                     "v",
                     dom(-1, 1, 0.5, 2.5),
                     {41, 41}});
        v.push_back({"axis-half",
                     "(0, 0, v)",
                     "(1, 0, 0)",
                     "(0, 1, 0)",
                     "v/2",
                     dom(-1, 1, 0.5, 2.5),
                     {41, 41}});
        v.push_back({"sphere-through-origin",
                     "(cos(u)*cos(v), cos(u)*sin(v), 1+sin(u))",
                     "(cos(u)*cos(v), cos(u)*sin(v), sin(u))",
                     "(-sin(u)*cos(v), -sin(u)*sin(v), cos(u))",
                     "sqrt(2+2*sin(u))",
                     dom(-1.2, 1.2, 0.0, 6.283185307179586),
                     {41, 41}});
        v.push_back({"concentric",
                     "(0, 0, 0)",
                     "(0, 0, 1)",
                     "(1, 0, 0)",
                     "sqrt(u^2+v^2)",
                     dom(-1, 1, -1, 1, "u=0 & v=0"),
                     {21, 21}});
        // Round sphere with its outward frame; exercised by the evolute code.
        v.push_back({"unit-sphere",
                     "(cos(u)*cos(v), cos(u)*sin(v), sin(u))",
                     "(cos(u)*cos(v), cos(u)*sin(v), sin(u))",
                     "(-sin(u)*cos(v), -sin(u)*sin(v), cos(u))",
                     "1",
                     dom(-1.2, 1.2, 0.0, 6.283185307179586),
                     {21, 21}});
        return v;
    }();
    return reg;
}

const Fixture* findFixture(const std::string& name) {
    for (const auto& f : fixtureRegistry())
        if (f.name == name) return &f;
    return nullptr;
}

SphereFamily makeFamily(const Fixture& fx, const Bindings& bindings) {
    SphereFamily fam;
    fam.fs.x = VecExpr::parse(fx.x, bindings);
    if (!fx.n.empty()) fam.fs.n = VecExpr::parse(fx.n, bindings);
    if (!fx.s.empty()) fam.fs.s = VecExpr::parse(fx.s, bindings);
    fam.fs.domain = fx.domain;
    fam.lambda = Expr::parse(fx.lambda, bindings);
    return fam;
}

}  // namespace envtool
