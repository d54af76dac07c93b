#pragma once

#include <cmath>
#include <stdexcept>

namespace envtool {

// Second-order forward-mode jet in the two parameters (u,v).
// Carries a value and the five independent partials; the mixed partial is
// stored once, so symmetry d2f/dudv == d2f/dvdu is built into the
// representation.
struct Jet2 {
    double val = 0.0;
    double du = 0.0, dv = 0.0;
    double duu = 0.0, duv = 0.0, dvv = 0.0;

    static Jet2 constant(double c) { return Jet2{c, 0, 0, 0, 0, 0}; }
    static Jet2 varU(double u0) { return Jet2{u0, 1, 0, 0, 0, 0}; }
    static Jet2 varV(double v0) { return Jet2{v0, 0, 1, 0, 0, 0}; }
};

// First-order jet. Derived quantities (invariants, creator components,
// envelope maps) are propagated at this order; their first partials come out
// exact because the underlying surface data is second order.
struct Jet1 {
    double val = 0.0;
    double du = 0.0, dv = 0.0;

    static Jet1 constant(double c) { return Jet1{c, 0, 0}; }
};

// --- Jet1 arithmetic -------------------------------------------------------

inline Jet1 operator+(const Jet1& a, const Jet1& b) { return {a.val + b.val, a.du + b.du, a.dv + b.dv}; }
inline Jet1 operator-(const Jet1& a, const Jet1& b) { return {a.val - b.val, a.du - b.du, a.dv - b.dv}; }
inline Jet1 operator-(const Jet1& a) { return {-a.val, -a.du, -a.dv}; }

inline Jet1 operator*(const Jet1& a, const Jet1& b) {
    return {a.val * b.val, a.du * b.val + a.val * b.du, a.dv * b.val + a.val * b.dv};
}
inline Jet1 operator*(double c, const Jet1& a) { return {c * a.val, c * a.du, c * a.dv}; }
inline Jet1 operator*(const Jet1& a, double c) { return c * a; }
inline Jet1 operator+(const Jet1& a, double c) { return {a.val + c, a.du, a.dv}; }
inline Jet1 operator+(double c, const Jet1& a) { return a + c; }
inline Jet1 operator-(const Jet1& a, double c) { return {a.val - c, a.du, a.dv}; }
inline Jet1 operator-(double c, const Jet1& a) { return {c - a.val, -a.du, -a.dv}; }

// f(g) with f' supplied at g.val.
inline Jet1 chain(const Jet1& g, double f, double fp) {
    return {f, fp * g.du, fp * g.dv};
}

inline Jet1 operator/(const Jet1& a, const Jet1& b) {
    const double inv = 1.0 / b.val;
    return a * chain(b, inv, -inv * inv);
}
inline Jet1 operator/(const Jet1& a, double c) { return a * (1.0 / c); }
inline Jet1 operator/(double c, const Jet1& b) {
    const double inv = 1.0 / b.val;
    return c * chain(b, inv, -inv * inv);
}

inline Jet1 sqrt(const Jet1& g) {
    const double s = std::sqrt(g.val);
    return chain(g, s, 0.5 / s);
}
inline Jet1 sin(const Jet1& g) { return chain(g, std::sin(g.val), std::cos(g.val)); }
inline Jet1 cos(const Jet1& g) { return chain(g, std::cos(g.val), -std::sin(g.val)); }
inline Jet1 exp(const Jet1& g) { const double e = std::exp(g.val); return chain(g, e, e); }
inline Jet1 log(const Jet1& g) { return chain(g, std::log(g.val), 1.0 / g.val); }
inline Jet1 atan(const Jet1& g) { return chain(g, std::atan(g.val), 1.0 / (1.0 + g.val * g.val)); }
inline Jet1 tan(const Jet1& g) {
    const double t = std::tan(g.val);
    return chain(g, t, 1.0 + t * t);
}

// --- Jet2 arithmetic -------------------------------------------------------

inline Jet2 operator+(const Jet2& a, const Jet2& b) {
    return {a.val + b.val, a.du + b.du, a.dv + b.dv, a.duu + b.duu, a.duv + b.duv, a.dvv + b.dvv};
}
inline Jet2 operator-(const Jet2& a, const Jet2& b) {
    return {a.val - b.val, a.du - b.du, a.dv - b.dv, a.duu - b.duu, a.duv - b.duv, a.dvv - b.dvv};
}
inline Jet2 operator-(const Jet2& a) { return {-a.val, -a.du, -a.dv, -a.duu, -a.duv, -a.dvv}; }

inline Jet2 operator*(const Jet2& a, const Jet2& b) {
    Jet2 r;
    r.val = a.val * b.val;
    r.du = a.du * b.val + a.val * b.du;
    r.dv = a.dv * b.val + a.val * b.dv;
    r.duu = a.duu * b.val + 2.0 * a.du * b.du + a.val * b.duu;
    r.duv = a.duv * b.val + a.du * b.dv + a.dv * b.du + a.val * b.duv;
    r.dvv = a.dvv * b.val + 2.0 * a.dv * b.dv + a.val * b.dvv;
    return r;
}
inline Jet2 operator*(double c, const Jet2& a) {
    return {c * a.val, c * a.du, c * a.dv, c * a.duu, c * a.duv, c * a.dvv};
}
inline Jet2 operator*(const Jet2& a, double c) { return c * a; }
inline Jet2 operator+(const Jet2& a, double c) { Jet2 r = a; r.val += c; return r; }
inline Jet2 operator+(double c, const Jet2& a) { return a + c; }
inline Jet2 operator-(const Jet2& a, double c) { Jet2 r = a; r.val -= c; return r; }
inline Jet2 operator-(double c, const Jet2& a) { return Jet2::constant(c) - a; }

// f(g) with f', f'' supplied at g.val.
inline Jet2 chain(const Jet2& g, double f, double fp, double fpp) {
    Jet2 r;
    r.val = f;
    r.du = fp * g.du;
    r.dv = fp * g.dv;
    r.duu = fpp * g.du * g.du + fp * g.duu;
    r.duv = fpp * g.du * g.dv + fp * g.duv;
    r.dvv = fpp * g.dv * g.dv + fp * g.dvv;
    return r;
}

inline Jet2 inverse(const Jet2& b) {
    const double inv = 1.0 / b.val;
    return chain(b, inv, -inv * inv, 2.0 * inv * inv * inv);
}
inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * inverse(b); }
inline Jet2 operator/(const Jet2& a, double c) { return a * (1.0 / c); }
inline Jet2 operator/(double c, const Jet2& b) { return c * inverse(b); }

inline Jet2 sqrt(const Jet2& g) {
    const double s = std::sqrt(g.val);
    return chain(g, s, 0.5 / s, -0.25 / (s * s * s));
}
inline Jet2 sin(const Jet2& g) {
    const double s = std::sin(g.val), c = std::cos(g.val);
    return chain(g, s, c, -s);
}
inline Jet2 cos(const Jet2& g) {
    const double s = std::sin(g.val), c = std::cos(g.val);
    return chain(g, c, -s, -c);
}
inline Jet2 tan(const Jet2& g) {
    const double t = std::tan(g.val);
    const double d = 1.0 + t * t;
    return chain(g, t, d, 2.0 * t * d);
}
inline Jet2 exp(const Jet2& g) {
    const double e = std::exp(g.val);
    return chain(g, e, e, e);
}
inline Jet2 log(const Jet2& g) {
    const double inv = 1.0 / g.val;
    return chain(g, std::log(g.val), inv, -inv * inv);
}
inline Jet2 atan(const Jet2& g) {
    const double d = 1.0 / (1.0 + g.val * g.val);
    return chain(g, std::atan(g.val), d, -2.0 * g.val * d * d);
}

// Integer power by repeated squaring; exact everywhere, including base 0
// with k >= 0 (the chain-rule form would produce 0 * inf there).
template <class J>
J ipow(const J& g, int k) {
    if (k == 0) return J::constant(1.0);
    bool neg = k < 0;
    unsigned long long e = neg ? static_cast<unsigned long long>(-(long long)k) : static_cast<unsigned long long>(k);
    J base = g;
    J acc = J::constant(1.0);
    while (e > 0) {
        if (e & 1ull) acc = acc * base;
        e >>= 1ull;
        if (e > 0) base = base * base;
    }
    if (neg) return 1.0 / acc;
    return acc;
}

// Lifts a scalar closure built from jet primitives to its full second-order
// jet at (u0, v0) by feeding it coordinate jets.
template <class F>
Jet2 jetLift(F&& f, double u0, double v0) {
    return f(Jet2::varU(u0), Jet2::varV(v0));
}

// --- Extraction ------------------------------------------------------------

inline Jet1 toJet1(const Jet2& a) { return {a.val, a.du, a.dv}; }
// First-order jet of d/du f and d/dv f, read off a second-order jet of f.
inline Jet1 derivU(const Jet2& a) { return {a.du, a.duu, a.duv}; }
inline Jet1 derivV(const Jet2& a) { return {a.dv, a.duv, a.dvv}; }

}  // namespace envtool
