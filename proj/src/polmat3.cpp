#include "polfocus/polmat3.hpp"

#include <algorithm>
#include <cmath>

namespace polfocus {

namespace {

constexpr double kOrthoTol = 1e-12;
constexpr double kHermTol = 1e-10;

std::array<double, 9> matmul(const std::array<double, 9>& a, const std::array<double, 9>& b) {
    std::array<double, 9> r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k)
                r[static_cast<size_t>(3 * i + j)] +=
                    a[static_cast<size_t>(3 * i + k)] * b[static_cast<size_t>(3 * k + j)];
    return r;
}

double det3(const std::array<double, 9>& m) {
    return m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
           m[2] * (m[3] * m[7] - m[4] * m[6]);
}

}  // namespace

Rotation3 Rotation3::identity() {
    return Rotation3({1, 0, 0, 0, 1, 0, 0, 0, 1});
}

Rotation3 Rotation3::about_axis(const Vec3& axis, double angle) {
    const Vec3 n = normalized(axis);
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    const double t = 1.0 - c;
    return Rotation3({t * n.x * n.x + c, t * n.x * n.y - s * n.z, t * n.x * n.z + s * n.y,
                      t * n.x * n.y + s * n.z, t * n.y * n.y + c, t * n.y * n.z - s * n.x,
                      t * n.x * n.z - s * n.y, t * n.y * n.z + s * n.x, t * n.z * n.z + c});
}

Rotation3 Rotation3::between(const Vec3& from, const Vec3& to) {
    const Vec3 f = normalized(from);
    const Vec3 t = normalized(to);
    const Vec3 w = cross(f, t);
    const double c = dot(f, t);
    if (1.0 + c < 1e-12)
        throw std::domain_error("Rotation3::between: directions are anti-parallel");
    // R = I + [w]_x + [w]_x^2 / (1 + c): exact for unit f, t; smooth away from c = -1.
    const double k = 1.0 / (1.0 + c);
    return Rotation3({1.0 + k * (-w.z * w.z - w.y * w.y), -w.z + k * (w.x * w.y),
                      w.y + k * (w.x * w.z),
                      w.z + k * (w.x * w.y), 1.0 + k * (-w.z * w.z - w.x * w.x),
                      -w.x + k * (w.y * w.z),
                      -w.y + k * (w.x * w.z), w.x + k * (w.y * w.z),
                      1.0 + k * (-w.y * w.y - w.x * w.x)});
}

Rotation3 Rotation3::from_matrix(const std::array<double, 9>& m) {
    std::array<double, 9> mt{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            mt[static_cast<size_t>(3 * i + j)] = m[static_cast<size_t>(3 * j + i)];
    const auto g = matmul(m, mt);
    double defect = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            defect = std::max(defect,
                              std::abs(g[static_cast<size_t>(3 * i + j)] - (i == j ? 1.0 : 0.0)));
    if (defect > kOrthoTol)
        throw std::invalid_argument("Rotation3::from_matrix: not orthonormal");
    if (std::abs(det3(m) - 1.0) > kOrthoTol)
        throw std::invalid_argument("Rotation3::from_matrix: determinant is not +1");
    return Rotation3(m);
}

Vec3 Rotation3::apply(const Vec3& v) const {
    return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z, m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
            m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
}

CVec3 Rotation3::apply(const CVec3& v) const {
    return {m_[0] * v.x + m_[1] * v.y + m_[2] * v.z, m_[3] * v.x + m_[4] * v.y + m_[5] * v.z,
            m_[6] * v.x + m_[7] * v.y + m_[8] * v.z};
}

Rotation3 Rotation3::transposed() const {
    std::array<double, 9> t{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t[static_cast<size_t>(3 * i + j)] = m_[static_cast<size_t>(3 * j + i)];
    return Rotation3(t);
}

Rotation3 Rotation3::operator*(const Rotation3& rhs) const {
    return Rotation3(matmul(m_, rhs.m_));
}

Matrix3c Rotation3::complex_matrix() const {
    Matrix3c m;
    for (size_t i = 0; i < 9; ++i) m.a[i] = m_[i];
    return m;
}

namespace {

// Roots of lambda^3 - c2 lambda^2 + c1 lambda - c0 for a Hermitian matrix (all real),
// via the shifted trigonometric form, then one Newton step per root on the original
// polynomial to squeeze out the trigonometric rounding.
std::array<double, 3> characteristic_roots(double c2, double c1, double c0) {
    const double s = c2 / 3.0;
    const double p = c1 - c2 * c2 / 3.0;                         // depressed: mu^3 + p mu + q
    const double q = -2.0 * c2 * c2 * c2 / 27.0 + c1 * c2 / 3.0 - c0;

    std::array<double, 3> r{};
    if (p >= -1e-300) {
        // Triple (or numerically indistinguishable) root at the shift point.
        r = {s, s, s};
    } else {
        const double m = 2.0 * std::sqrt(-p / 3.0);
        double arg = 3.0 * q / (p * m);
        arg = std::clamp(arg, -1.0, 1.0);
        const double phi = std::acos(arg) / 3.0;
        for (int k = 0; k < 3; ++k)
            r[static_cast<size_t>(k)] =
                s + m * std::cos(phi - 2.0 * M_PI * static_cast<double>(k) / 3.0);
    }

    // One Newton step per root squeezes out the trigonometric rounding. Inside
    // a degenerate cluster the derivative vanishes and f/f' is pure rounding
    // noise, so the step is skipped there; the trigonometric value is already
    // at ulp level for clustered roots.
    const double span =
        std::max({std::abs(r[0]), std::abs(r[1]), std::abs(r[2]), 1e-300});
    for (size_t i = 0; i < 3; ++i) {
        double sep = 1e300;
        for (size_t j = 0; j < 3; ++j)
            if (j != i) sep = std::min(sep, std::abs(r[i] - r[j]));
        if (sep <= 1e-8 * span) continue;
        double& x = r[i];
        const double f = ((x - c2) * x + c1) * x - c0;
        const double df = (3.0 * x - 2.0 * c2) * x + c1;
        if (std::abs(df) > 1e-300) x -= f / df;
    }
    std::sort(r.begin(), r.end(), std::greater<>());
    return r;
}

// Deterministic phase: rotate so the largest-modulus component is real positive.
CVec3 canonical_phase(const CVec3& v) {
    const std::array<cplx, 3> c{v.x, v.y, v.z};
    size_t imax = 0;
    double best = 0.0;
    for (size_t i = 0; i < 3; ++i) {
        if (std::abs(c[i]) > best) {
            best = std::abs(c[i]);
            imax = i;
        }
    }
    if (best == 0.0) return v;
    const cplx phase = std::conj(c[imax]) / std::abs(c[imax]);
    return phase * v;
}

CVec3 row(const Matrix3c& m, int i) {
    return {m(i, 0), m(i, 1), m(i, 2)};
}

// Null vector of the (numerically) rank-deficient M = H - lambda I. The bilinear
// cross product of two rows solves both row equations at once; fall back to a
// single-row complement (rank 1) or an arbitrary direction (rank 0). Rank
// thresholds are relative to M's own magnitude, so the classification is
// invariant under a uniform rescaling of the input.
CVec3 null_vector(const Matrix3c& m) {
    const CVec3 r0 = row(m, 0), r1 = row(m, 1), r2 = row(m, 2);
    const std::array<CVec3, 3> crosses{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
    size_t ibest = 0;
    double best = -1.0;
    for (size_t i = 0; i < 3; ++i) {
        const double n2 = norm2(crosses[i]);
        if (n2 > best) {
            best = n2;
            ibest = i;
        }
    }
    const double mscale = std::max(max_abs(m), 1e-150);
    const double rank2_floor = std::pow(1e-7 * mscale * mscale, 2);
    if (best > rank2_floor) return normalized(crosses[ibest]);

    // Rank <= 1: any vector annihilated by the largest row works.
    const std::array<CVec3, 3> rows{r0, r1, r2};
    size_t irow = 0;
    double rbest = -1.0;
    for (size_t i = 0; i < 3; ++i) {
        if (norm2(rows[i]) > rbest) {
            rbest = norm2(rows[i]);
            irow = i;
        }
    }
    if (rbest <= 1e-28 * mscale * mscale) return CVec3{1.0, 0.0, 0.0};  // rank 0
    const CVec3 r = rows[irow];
    const std::array<CVec3, 3> e{CVec3{1, 0, 0}, CVec3{0, 1, 0}, CVec3{0, 0, 1}};
    size_t iseed = 0;
    double sbest = 1e300;
    for (size_t i = 0; i < 3; ++i) {
        const double overlap = std::abs(dot(r, e[i]));
        if (overlap < sbest) {
            sbest = overlap;
            iseed = i;
        }
    }
    return normalized(cross(r, e[iseed]));
}

// Unit vector orthogonal (in the Hermitian inner product) to the given unit
// vector, seeded from the least-aligned coordinate direction. The seed keeps a
// residual of at least sqrt(2/3) after projection, so the result is well scaled.
CVec3 orthogonal_completion(const CVec3& u) {
    const std::array<CVec3, 3> e{CVec3{1, 0, 0}, CVec3{0, 1, 0}, CVec3{0, 0, 1}};
    size_t ibest = 0;
    double best = 2.0;
    for (size_t i = 0; i < 3; ++i) {
        const double overlap = std::abs(inner(u, e[i]));
        if (overlap < best) {
            best = overlap;
            ibest = i;
        }
    }
    return normalized(e[ibest] - inner(u, e[ibest]) * u);
}

bool lex_less(const CVec3& a, const CVec3& b) {
    const std::array<double, 6> ka{a.x.real(), a.x.imag(), a.y.real(),
                                   a.y.imag(), a.z.real(), a.z.imag()};
    const std::array<double, 6> kb{b.x.real(), b.x.imag(), b.y.real(),
                                   b.y.imag(), b.z.real(), b.z.imag()};
    return ka < kb;
}

}  // namespace

Eigensystem3 eigensystem_hermitian3(const Matrix3c& a) {
    if (hermiticity_defect(a) > kHermTol)
        throw std::domain_error("eigensystem_hermitian3: input is not Hermitian");
    // Work on the exactly Hermitian average to suppress rounding asymmetry.
    const Matrix3c h = 0.5 * (a + adjoint(a));

    const double c2 = std::real(trace(h));
    const double c1 = std::real(h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0)) +
                      std::real(h(0, 0) * h(2, 2) - h(0, 2) * h(2, 0)) +
                      std::real(h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1));
    const double c0 =
        std::real(h(0, 0) * (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1)) -
                  h(0, 1) * (h(1, 0) * h(2, 2) - h(1, 2) * h(2, 0)) +
                  h(0, 2) * (h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0)));

    Eigensystem3 out;
    out.values = characteristic_roots(c2, c1, c0);  // descending

    const double scale = std::max(max_abs(h), 1e-300);
    const double cluster = 1e-8 * scale;
    const double l0 = out.values[0], l1 = out.values[1], l2 = out.values[2];

    if (l0 - l2 <= cluster) {
        // Numerically scalar matrix: any frame diagonalizes it.
        out.vectors = {CVec3{1, 0, 0}, CVec3{0, 1, 0}, CVec3{0, 0, 1}};
        return out;
    }

    const auto shifted = [&h](double lambda) {
        Matrix3c m = h;
        for (int d = 0; d < 3; ++d) m(d, d) -= lambda;
        return m;
    };

    // Anchor the best-isolated eigenvalue: its shifted matrix has a clean rank-2
    // row space, so the cross-product null vector stays reliable even when the
    // remaining pair is degenerate.
    const bool top_isolated = (l0 - l1) >= (l1 - l2);
    const size_t ia = top_isolated ? 0 : 2;
    const size_t ip = top_isolated ? 1 : 0;
    const size_t iq = top_isolated ? 2 : 1;

    const CVec3 va = canonical_phase(null_vector(shifted(out.values[ia])));
    CVec3 vp;
    if (out.values[ip] - out.values[iq] > cluster) {
        vp = null_vector(shifted(out.values[ip]));
        vp = vp - inner(va, vp) * va;
        if (norm2(vp) < 1e-8) vp = orthogonal_completion(va);
        vp = normalized(vp);
    } else {
        // Degenerate pair: its eigenspace is exactly the orthogonal complement
        // of the anchored vector, so any completion of the frame is valid.
        vp = orthogonal_completion(va);
    }
    vp = canonical_phase(vp);
    // For orthonormal complex u, v the conjugated cross product completes them
    // to a unitary frame (it is the third row of the unitary with rows u, v).
    const CVec3 vq = canonical_phase(conj(cross(va, vp)));

    out.vectors[ia] = va;
    out.vectors[ip] = vp;
    out.vectors[iq] = vq;

    // Descending eigenvalues with a lexicographic tie-break on the vectors.
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int x, int y) {
        const double vx = out.values[static_cast<size_t>(x)];
        const double vy = out.values[static_cast<size_t>(y)];
        if (vx != vy) return vx > vy;
        return lex_less(out.vectors[static_cast<size_t>(x)], out.vectors[static_cast<size_t>(y)]);
    });
    Eigensystem3 sorted;
    for (int i = 0; i < 3; ++i) {
        sorted.values[static_cast<size_t>(i)] = out.values[static_cast<size_t>(idx[static_cast<size_t>(i)])];
        sorted.vectors[static_cast<size_t>(i)] = out.vectors[static_cast<size_t>(idx[static_cast<size_t>(i)])];
    }
    return sorted;
}

DensityMatrix3 DensityMatrix3::checked(const Matrix3c& m, double tol) {
    if (!(tol >= 0.0)) throw std::invalid_argument("DensityMatrix3: negative tolerance");
    if (hermiticity_defect(m) > tol)
        throw std::invalid_argument("DensityMatrix3: not Hermitian within tolerance");
    if (std::abs(trace(m) - 1.0) > tol)
        throw std::invalid_argument("DensityMatrix3: trace differs from 1");
    const Matrix3c h = 0.5 * (m + adjoint(m));
    // Positive semidefiniteness via all seven principal minors (for a
    // Hermitian matrix, nonnegative minors are exactly equivalent to a
    // nonnegative spectrum).  Each minor is a short polynomial in the
    // entries, so an entry perturbation of size tol shifts it by a small
    // multiple of tol at the matrix scale.  Closed-form eigenvalues cannot
    // serve here: a cluster of near-zero eigenvalues is resolved only to
    // about sqrt(machine epsilon), which would reject exact matrices.
    // The floors below are first-order perturbation bounds with slack for
    // the quadratic remainder.
    const double s = std::max(max_abs(h), 1.0);
    const double d0 = std::real(h(0, 0));
    const double d1 = std::real(h(1, 1));
    const double d2 = std::real(h(2, 2));
    const bool diag_ok = d0 >= -tol && d1 >= -tol && d2 >= -tol;
    const double floor2 = -6.0 * s * tol;
    const bool pairs_ok = d0 * d1 - std::norm(h(0, 1)) >= floor2 &&
                          d0 * d2 - std::norm(h(0, 2)) >= floor2 &&
                          d1 * d2 - std::norm(h(1, 2)) >= floor2;
    const cplx det = h(0, 0) * (h(1, 1) * h(2, 2) - h(1, 2) * h(2, 1)) -
                     h(0, 1) * (h(1, 0) * h(2, 2) - h(1, 2) * h(2, 0)) +
                     h(0, 2) * (h(1, 0) * h(2, 1) - h(1, 1) * h(2, 0));
    const bool det_ok = std::real(det) >= -24.0 * s * s * tol;
    if (!diag_ok || !pairs_ok || !det_ok)
        throw std::invalid_argument("DensityMatrix3: not positive semidefinite");
    return DensityMatrix3(h);
}

DensityMatrix3 DensityMatrix3::from_weighted_outer_products(
    std::span<const std::pair<double, CVec3>> samples) {
    if (samples.empty())
        throw std::domain_error("from_weighted_outer_products: empty sample list");
    Matrix3c acc;
    double tracew = 0.0;
    for (const auto& [w, v] : samples) {
        if (!(w >= 0.0))
            throw std::invalid_argument("from_weighted_outer_products: negative weight");
        acc = acc + w * outer(v, v);
        tracew += w * norm2(v);
    }
    if (!(tracew > 0.0))
        throw std::domain_error("from_weighted_outer_products: zero total weight");
    return DensityMatrix3((1.0 / tracew) * acc);
}

DensityMatrix3 rotate_density(const DensityMatrix3& rho, const Rotation3& r) {
    const Matrix3c rc = r.complex_matrix();
    // Similarity by a rotation leaves trace and the spectrum invariant, so the
    // input's validated axioms carry over; only rounding drift in Hermiticity
    // needs absorbing.
    const Matrix3c m = rc * rho.matrix() * adjoint(rc);
    return DensityMatrix3(0.5 * (m + adjoint(m)));
}

double trace_distance_term(const DensityMatrix3& a, const DensityMatrix3& b) {
    const auto eig = eigensystem_hermitian3(a.matrix() - b.matrix());
    return std::abs(eig.values[0]) + std::abs(eig.values[1]) + std::abs(eig.values[2]);
}

double error_probability(const DensityMatrix3& a, const DensityMatrix3& b) {
    const double pe = 0.5 - 0.25 * trace_distance_term(a, b);
    return std::clamp(pe, 0.0, 0.5);
}

}  // namespace polfocus
