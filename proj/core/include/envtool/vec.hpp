#pragma once

#include <cmath>

#include "envtool/jets.hpp"

namespace envtool {

// Exact-arity 3-vector over any scalar supporting +,-,*,/ and sqrt.
template <class T>
struct Vec3T {
    T x{}, y{}, z{};
};

using Vec3 = Vec3T<double>;
using Vec3j1 = Vec3T<Jet1>;
using Vec3j2 = Vec3T<Jet2>;

struct Vec2 {
    double x = 0.0, y = 0.0;
};

template <class T>
Vec3T<T> operator+(const Vec3T<T>& a, const Vec3T<T>& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
template <class T>
Vec3T<T> operator-(const Vec3T<T>& a, const Vec3T<T>& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
template <class T>
Vec3T<T> operator-(const Vec3T<T>& a) { return {-a.x, -a.y, -a.z}; }
template <class T, class S>
Vec3T<T> operator*(const S& c, const Vec3T<T>& a) { return {c * a.x, c * a.y, c * a.z}; }
template <class T, class S>
Vec3T<T> operator*(const Vec3T<T>& a, const S& c) { return c * a; }
template <class T, class S>
Vec3T<T> operator/(const Vec3T<T>& a, const S& c) { return {a.x / c, a.y / c, a.z / c}; }

template <class T>
T dot(const Vec3T<T>& a, const Vec3T<T>& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

template <class T>
Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class T>
T norm2(const Vec3T<T>& a) { return dot(a, a); }

inline double norm(const Vec3& a) { return std::sqrt(norm2(a)); }
inline Jet1 norm(const Vec3j1& a) { return sqrt(norm2(a)); }
inline Jet2 norm(const Vec3j2& a) { return sqrt(norm2(a)); }

template <class T>
Vec3T<T> normalized(const Vec3T<T>& a) { return a / norm(a); }

inline Vec3 value(const Vec3j1& a) { return {a.x.val, a.y.val, a.z.val}; }
inline Vec3 value(const Vec3j2& a) { return {a.x.val, a.y.val, a.z.val}; }

inline Vec3j1 toJet1(const Vec3j2& a) { return {toJet1(a.x), toJet1(a.y), toJet1(a.z)}; }
inline Vec3j1 derivU(const Vec3j2& a) { return {derivU(a.x), derivU(a.y), derivU(a.z)}; }
inline Vec3j1 derivV(const Vec3j2& a) { return {derivV(a.x), derivV(a.y), derivV(a.z)}; }

// Per-point partial-derivative values of a Jet1 vector field.
inline Vec3 duValue(const Vec3j1& a) { return {a.x.du, a.y.du, a.z.du}; }
inline Vec3 dvValue(const Vec3j1& a) { return {a.x.dv, a.y.dv, a.z.dv}; }

inline Vec3j1 constantVec(const Vec3& a) {
    return {Jet1::constant(a.x), Jet1::constant(a.y), Jet1::constant(a.z)};
}

}  // namespace envtool
