#pragma once

#include <span>
#include <utility>

#include "polfocus/types.hpp"

namespace polfocus {

/// Proper rotation of R^3 (orthonormal, det +1).
class Rotation3 {
  public:
    [[nodiscard]] static Rotation3 identity();

    /// Rodrigues rotation by `angle` (radians) about `axis` (normalized internally).
    [[nodiscard]] static Rotation3 about_axis(const Vec3& axis, double angle);

    /// Minimal rotation taking direction `from` onto direction `to`; rotation axis is
    /// from x to. Throws std::domain_error for (anti)parallel degenerate input.
    [[nodiscard]] static Rotation3 between(const Vec3& from, const Vec3& to);

    /// Validated construction from a row-major 3x3 array: requires R R^T = I and
    /// det R = +1 within 1e-12, else throws std::invalid_argument.
    [[nodiscard]] static Rotation3 from_matrix(const std::array<double, 9>& m);

    [[nodiscard]] double operator()(int i, int j) const {
        return m_[static_cast<size_t>(3 * i + j)];
    }

    [[nodiscard]] Vec3 apply(const Vec3& v) const;
    [[nodiscard]] CVec3 apply(const CVec3& v) const;
    [[nodiscard]] Rotation3 transposed() const;  // equals the inverse
    [[nodiscard]] Rotation3 operator*(const Rotation3& rhs) const;
    [[nodiscard]] Matrix3c complex_matrix() const;

  private:
    explicit Rotation3(const std::array<double, 9>& m) : m_(m) {}
    std::array<double, 9> m_{};
};

/// Eigendecomposition of a Hermitian 3x3 matrix.
struct Eigensystem3 {
    std::array<double, 3> values{};   // descending
    std::array<CVec3, 3> vectors{};   // orthonormal; vectors[i] belongs to values[i]
};

/// Closed-form Hermitian 3x3 eigensolver: characteristic polynomial via the
/// trigonometric depressed cubic, one Newton polish per root, eigenvectors from the
/// dominant cross product of (A - lambda I) rows with degenerate-rank fallbacks.
/// Requires hermiticity defect <= 1e-10, else throws std::domain_error.
[[nodiscard]] Eigensystem3 eigensystem_hermitian3(const Matrix3c& a);

/// Effective 3x3 polarization density matrix: Hermitian, unit trace, positive
/// semidefinite (all within a validation tolerance fixed at construction).
class DensityMatrix3 {
  public:
    /// Validates Hermiticity, unit trace and positive semidefiniteness within `tol`;
    /// throws std::invalid_argument on violation.
    [[nodiscard]] static DensityMatrix3 checked(const Matrix3c& m, double tol);

    /// Builds sum_i w_i v_i v_i^dagger normalized to unit trace. Weights must be
    /// nonnegative with positive total; throws std::invalid_argument otherwise.
    [[nodiscard]] static DensityMatrix3 from_weighted_outer_products(
        std::span<const std::pair<double, CVec3>> samples);

    [[nodiscard]] const Matrix3c& matrix() const { return m_; }
    [[nodiscard]] cplx operator()(int i, int j) const { return m_(i, j); }

  private:
    explicit DensityMatrix3(const Matrix3c& m) : m_(m) {}
    Matrix3c m_;

    friend DensityMatrix3 rotate_density(const DensityMatrix3& rho, const Rotation3& r);
};

/// Conjugates the state by a spatial rotation: R rho R^T (R real orthogonal).
/// The conjugation preserves the axioms the input was validated against, so the
/// result carries the input's tolerance rather than being re-checked.
[[nodiscard]] DensityMatrix3 rotate_density(const DensityMatrix3& rho, const Rotation3& r);

/// Sum of absolute eigenvalues of the Hermitian difference rho_a - rho_b; in [0, 2].
[[nodiscard]] double trace_distance_term(const DensityMatrix3& a, const DensityMatrix3& b);

/// Minimum-error (Helstrom) probability for equal priors:
/// 1/2 - trace_distance_term/4, clamped to [0, 1/2] against rounding.
[[nodiscard]] double error_probability(const DensityMatrix3& a, const DensityMatrix3& b);

}  // namespace polfocus
