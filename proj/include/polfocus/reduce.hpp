#pragma once

#include "polfocus/modes.hpp"
#include "polfocus/polmat3.hpp"
#include "polfocus/quad.hpp"
#include "polfocus/types.hpp"

namespace polfocus::reduce {

/// Effective 3x3 polarization density matrix of a mode:
/// rho_mn = integral of |f|^2 alpha_m alpha_n^* over the mode measure, divided
/// by the norm integral. Exact (no quadrature) for discrete modes. Throws
/// quad::QuadratureError when the quadrature fails to converge. Optional
/// `stats` collects the quadrature diagnostics.
[[nodiscard]] DensityMatrix3 effective_density(const modes::PhotonMode& mode,
                                               const quad::QuadratureSpec& spec = {},
                                               quad::QuadratureStats* stats = nullptr);

/// Diagnostic 2x2 reduction onto the helicity pair: entries are the momentum
/// integrals of f_sigma f_sigma'^* with f_sigma = f * <eps_sigma, alpha>,
/// normalized to unit trace. Unlike the 3x3 form, this object has no
/// rotation-covariant transformation law; tests exhibit a counterexample.
[[nodiscard]] Matrix2c naive_reduced_2x2(const modes::PhotonMode& mode,
                                         const quad::QuadratureSpec& spec = {},
                                         quad::QuadratureStats* stats = nullptr);

/// Leading-order density matrix of a circular wavepacket with mixedness
/// parameter omega: (1 - omega^2/2) times the circular projector on the x,y
/// block plus omega^2/2 in the zz corner. Valid for 0 <= omega < 0.3.
[[nodiscard]] DensityMatrix3 paraxial_series_density(double omega, int helicity);

/// Quoted leading-order misidentification probability omega^2/2 for the
/// opposite-helicity wavepacket pair. Note: the Helstrom value of the
/// paraxial_series_density pair itself evaluates to omega^2/4 exactly; this
/// function returns the conventional omega^2/2 estimate. Valid for
/// 0 <= omega < 0.3.
[[nodiscard]] double paraxial_series_error_probability(double omega);

/// Mixedness parameter read off a computed density matrix as sqrt(2 rho_zz),
/// assuming the mean momentum points along +z.
[[nodiscard]] double omega_from_density(const DensityMatrix3& rho);

/// Intensity-weighted mean propagation direction: normalized integral of
/// |f|^2 k_hat over the mode measure.
[[nodiscard]] Vec3 mean_wave_direction(const modes::PhotonMode& mode,
                                       const quad::QuadratureSpec& spec = {});

/// Largest coupling between the transverse block and the longitudinal axis
/// after rotating `axis` onto +z: max of |rho'_xz| and |rho'_yz|.
[[nodiscard]] double block_residual(const DensityMatrix3& rho, const Vec3& axis);

}  // namespace polfocus::reduce
