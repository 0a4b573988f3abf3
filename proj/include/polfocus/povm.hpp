#pragma once

#include <cstdint>

#include "polfocus/modes.hpp"
#include "polfocus/quad.hpp"
#include "polfocus/types.hpp"

namespace polfocus::povm {

/// Expansion of a polarization state along a Cartesian direction into the
/// circular pair and the longitudinal unit vector at one wave vector.
struct DirectionDecomposition {
    Vec3 direction;
    cplx x_plus;    // eps_plus(k) . direction (bilinear)
    cplx x_minus;   // eps_minus(k) . direction
    double x_long;  // direction . k_hat
};

/// Decompose the unit direction j at wave vector k. Inherits the circular
/// basis domain (undefined on the -z axis). The moduli satisfy
/// |x_plus|^2 + |x_minus|^2 + x_long^2 = 1.
[[nodiscard]] DirectionDecomposition decompose_direction(const Vec3& j, const WaveVector& k);

/// Transversal part of the unit direction j at k, computed geometrically as
/// j - (j . k_hat) k_hat (no basis singularity anywhere). Where the circular
/// basis exists it equals conj(x_plus) eps_plus + conj(x_minus) eps_minus.
/// Its squared length is 1 - (j . k_hat)^2.
[[nodiscard]] CVec3 transversal_part(const Vec3& j, const WaveVector& k);

/// Measurement element for absorption along a Cartesian direction.
struct PovmElement {
    Vec3 direction;
    [[nodiscard]] CVec3 b(const WaveVector& k) const { return transversal_part(direction, k); }
};

/// Probability of the direction-j outcome on a mode: the norm-weighted
/// integral of |b_j(k) . conj(alpha(k))|^2, equal to the jj diagonal of the
/// effective density matrix. Throws quad::QuadratureError on non-convergence.
[[nodiscard]] double povm_expectation(const modes::PhotonMode& mode, const Vec3& j,
                                      const quad::QuadratureSpec& spec = {});

/// Max-norm of sum_j b_j b_j^dagger minus the transversal projector
/// I - k_hat k_hat^T at one wave vector; an algebraic identity, so the result
/// is bounded by rounding (<= 1e-12 for any k != 0).
[[nodiscard]] double completeness_defect(const WaveVector& k);

/// Defect of the three-direction resolution of the 3x3 identity at one wave
/// vector, reconstructed through the circular decomposition: covers the
/// reconstruction residual per direction, the coefficient norm identity, and
/// the summed outer products against I.
[[nodiscard]] double direction_state_completeness_at(const WaveVector& k);

/// Max of direction_state_completeness_at over `samples` seeded random unit
/// wave vectors (drawn away from the -z axis where the decomposition is
/// undefined).
[[nodiscard]] double direction_state_completeness(int samples = 100,
                                                  std::uint64_t seed = 0x706f6c666f637573ULL);

}  // namespace polfocus::povm
