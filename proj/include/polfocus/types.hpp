#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace polfocus {

using cplx = std::complex<double>;

/// Real 3-vector. Also used for wave vectors (units 1/m) and unit directions.
struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

using WaveVector = Vec3;

[[nodiscard]] constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
[[nodiscard]] constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
[[nodiscard]] constexpr Vec3 operator*(double s, const Vec3& v) {
    return {s * v.x, s * v.y, s * v.z};
}
[[nodiscard]] constexpr double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
[[nodiscard]] constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
[[nodiscard]] inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

/// Unit vector along v; throws on (near-)zero input.
[[nodiscard]] inline Vec3 normalized(const Vec3& v) {
    const double n = norm(v);
    if (!(n > 0.0)) throw std::domain_error("normalized: zero vector");
    return (1.0 / n) * v;
}

/// Complex 3-vector (polarization amplitudes).
struct CVec3 {
    cplx x{};
    cplx y{};
    cplx z{};
};

[[nodiscard]] inline CVec3 to_complex(const Vec3& v) { return {v.x, v.y, v.z}; }

[[nodiscard]] inline CVec3 operator+(const CVec3& a, const CVec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
[[nodiscard]] inline CVec3 operator-(const CVec3& a, const CVec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
[[nodiscard]] inline CVec3 operator*(const cplx& s, const CVec3& v) {
    return {s * v.x, s * v.y, s * v.z};
}
[[nodiscard]] inline CVec3 conj(const CVec3& v) {
    return {std::conj(v.x), std::conj(v.y), std::conj(v.z)};
}

/// Bilinear contraction sum_i a_i b_i (no conjugation).
[[nodiscard]] inline cplx dot(const CVec3& a, const CVec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
/// Hermitian inner product sum_i conj(a_i) b_i.
[[nodiscard]] inline cplx inner(const CVec3& a, const CVec3& b) {
    return std::conj(a.x) * b.x + std::conj(a.y) * b.y + std::conj(a.z) * b.z;
}
/// Formal (bilinear) cross product; a x b is bilinear-orthogonal to both factors.
[[nodiscard]] inline CVec3 cross(const CVec3& a, const CVec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
[[nodiscard]] inline double norm2(const CVec3& v) {
    return std::norm(v.x) + std::norm(v.y) + std::norm(v.z);
}
[[nodiscard]] inline double norm(const CVec3& v) { return std::sqrt(norm2(v)); }

[[nodiscard]] inline CVec3 normalized(const CVec3& v) {
    const double n = norm(v);
    if (!(n > 0.0)) throw std::domain_error("normalized: zero vector");
    return (1.0 / n) * v;
}

/// Dense complex 3x3 matrix, row-major storage.
struct Matrix3c {
    std::array<cplx, 9> a{};

    [[nodiscard]] cplx& operator()(int i, int j) { return a[static_cast<size_t>(3 * i + j)]; }
    [[nodiscard]] const cplx& operator()(int i, int j) const {
        return a[static_cast<size_t>(3 * i + j)];
    }

    [[nodiscard]] static Matrix3c zero() { return {}; }
    [[nodiscard]] static Matrix3c identity() {
        Matrix3c m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
};

[[nodiscard]] inline Matrix3c operator+(const Matrix3c& a, const Matrix3c& b) {
    Matrix3c r;
    for (size_t i = 0; i < 9; ++i) r.a[i] = a.a[i] + b.a[i];
    return r;
}
[[nodiscard]] inline Matrix3c operator-(const Matrix3c& a, const Matrix3c& b) {
    Matrix3c r;
    for (size_t i = 0; i < 9; ++i) r.a[i] = a.a[i] - b.a[i];
    return r;
}
[[nodiscard]] inline Matrix3c operator*(const cplx& s, const Matrix3c& m) {
    Matrix3c r;
    for (size_t i = 0; i < 9; ++i) r.a[i] = s * m.a[i];
    return r;
}
[[nodiscard]] inline Matrix3c operator*(const Matrix3c& a, const Matrix3c& b) {
    Matrix3c r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
    return r;
}
[[nodiscard]] inline CVec3 operator*(const Matrix3c& m, const CVec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

[[nodiscard]] inline Matrix3c adjoint(const Matrix3c& m) {
    Matrix3c r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = std::conj(m(j, i));
    return r;
}
[[nodiscard]] inline Matrix3c conj(const Matrix3c& m) {
    Matrix3c r;
    for (size_t i = 0; i < 9; ++i) r.a[i] = std::conj(m.a[i]);
    return r;
}
[[nodiscard]] inline cplx trace(const Matrix3c& m) { return m(0, 0) + m(1, 1) + m(2, 2); }

/// Entrywise max modulus (max-norm).
[[nodiscard]] inline double max_abs(const Matrix3c& m) {
    double r = 0.0;
    for (const auto& e : m.a) r = std::max(r, std::abs(e));
    return r;
}

/// max |m - m^dagger| entrywise: 0 for exactly Hermitian input.
[[nodiscard]] inline double hermiticity_defect(const Matrix3c& m) {
    return max_abs(m - adjoint(m));
}

/// Rank-one outer product u v^dagger.
[[nodiscard]] inline Matrix3c outer(const CVec3& u, const CVec3& v) {
    Matrix3c r;
    const std::array<cplx, 3> uu{u.x, u.y, u.z};
    const std::array<cplx, 3> vv{std::conj(v.x), std::conj(v.y), std::conj(v.z)};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = uu[static_cast<size_t>(i)] * vv[static_cast<size_t>(j)];
    return r;
}

/// Complex 2x2 matrix (helicity-pair reductions), row-major.
struct Matrix2c {
    std::array<cplx, 4> a{};

    [[nodiscard]] cplx& operator()(int i, int j) { return a[static_cast<size_t>(2 * i + j)]; }
    [[nodiscard]] const cplx& operator()(int i, int j) const {
        return a[static_cast<size_t>(2 * i + j)];
    }
};

[[nodiscard]] inline Matrix2c operator-(const Matrix2c& x, const Matrix2c& y) {
    Matrix2c r;
    for (size_t i = 0; i < 4; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}
[[nodiscard]] inline cplx trace(const Matrix2c& m) { return m(0, 0) + m(1, 1); }
[[nodiscard]] inline double max_abs(const Matrix2c& m) {
    double r = 0.0;
    for (const auto& e : m.a) r = std::max(r, std::abs(e));
    return r;
}
[[nodiscard]] inline double hermiticity_defect(const Matrix2c& m) {
    double r = std::max(std::abs(std::imag(m(0, 0))), std::abs(std::imag(m(1, 1))));
    return std::max(r, std::abs(m(0, 1) - std::conj(m(1, 0))));
}

/// Eigenvalues of a Hermitian 2x2 matrix, ascending.
[[nodiscard]] inline std::array<double, 2> eigenvalues_hermitian2(const Matrix2c& m) {
    const double a = std::real(m(0, 0));
    const double d = std::real(m(1, 1));
    const double off = std::abs(m(0, 1));
    const double mid = 0.5 * (a + d);
    const double rad = std::hypot(0.5 * (a - d), off);
    return {mid - rad, mid + rad};
}

}  // namespace polfocus
