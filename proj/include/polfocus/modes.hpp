#pragma once

#include <functional>
#include <vector>

#include "polfocus/polmat3.hpp"
#include "polfocus/quad.hpp"
#include "polfocus/types.hpp"

namespace polfocus::modes {

/// Circular polarization pair attached to one wave vector.
struct HelicityBasis {
    CVec3 eps_plus;   // right-circular unit vector at k
    CVec3 eps_minus;  // componentwise conjugate of eps_plus
    Vec3 k_hat;
};

/// Circular basis transported from the +z pole by the minimal rotation taking
/// z_hat onto k_hat, in closed form. Both vectors are unit, mutually
/// orthogonal, and truly transversal (k . eps = 0 without conjugation). The
/// transport is smooth everywhere except the -z axis, where it is undefined;
/// that axis and k = 0 raise std::domain_error.
[[nodiscard]] HelicityBasis helicity_basis(const WaveVector& k);

/// Gaussian momentum distribution: radial spread delta_r about the axis and
/// longitudinal spread delta_z about the central wavenumber k0, carrying a
/// circular polarization label.
struct GaussianPacket {
    double k0 = 0.0;       // central wavenumber, 1/m
    double delta_r = 0.0;  // radial momentum spread, 1/m
    double delta_z = 0.0;  // longitudinal momentum spread, 1/m
    int helicity = +1;     // +1 or -1

    [[nodiscard]] static GaussianPacket from_spreads(double k0, double delta_r, double delta_z,
                                                     int helicity);
    /// Beam-radius parameterization: delta_r = 1/tau exactly.
    [[nodiscard]] static GaussianPacket from_beam_radius(double k0, double tau, double delta_z,
                                                         int helicity);

    /// Validity flag for the small-angle treatment.
    [[nodiscard]] bool paraxial() const { return delta_r / k0 < 0.1; }
};

/// Unnormalized amplitude exp(-(kz-k0)^2/(2 delta_z^2)) exp(-k_perp^2/(2 delta_r^2)).
/// The normalization constant is left to the norm integral so that every mode
/// takes the same numeric path.
[[nodiscard]] double gaussian_amplitude(const GaussianPacket& p, const WaveVector& k);

/// Leading-order mixedness parameter delta_r / k0.
[[nodiscard]] double omega_parameter(const GaussianPacket& p);

/// One delta-like momentum component of a discrete mode.
struct ModeAtom {
    double weight = 0.0;  // |f|^2-measure mass carried by this component
    WaveVector k;
    CVec3 polarization;
};

/// One-photon mode data: a momentum amplitude f(k) and a polarization field
/// alpha(k) over a box support, or a finite list of delta-like atoms. The
/// polarization field must be unit-norm and transversal (k . alpha = 0)
/// wherever the amplitude has support.
class PhotonMode {
  public:
    [[nodiscard]] static PhotonMode continuous(std::function<cplx(const WaveVector&)> amplitude,
                                               std::function<CVec3(const WaveVector&)> polarization,
                                               const quad::Box3& support);
    [[nodiscard]] static PhotonMode discrete(std::vector<ModeAtom> atoms);

    [[nodiscard]] bool is_discrete() const { return !atoms_.empty(); }
    [[nodiscard]] const std::vector<ModeAtom>& atoms() const { return atoms_; }
    [[nodiscard]] cplx amplitude(const WaveVector& k) const { return amplitude_(k); }
    [[nodiscard]] CVec3 polarization(const WaveVector& k) const { return polarization_(k); }
    [[nodiscard]] const quad::Box3& support() const { return support_; }

  private:
    PhotonMode() = default;
    std::function<cplx(const WaveVector&)> amplitude_;
    std::function<CVec3(const WaveVector&)> polarization_;
    quad::Box3 support_{};
    std::vector<ModeAtom> atoms_;
};

/// Single-momentum mode; its reduction is exact (no quadrature involved).
/// Requires |pol| = 1 and k . pol = 0 within 1e-12, else std::domain_error.
[[nodiscard]] PhotonMode plane_wave_mode(const WaveVector& k0, const CVec3& pol);

/// Gaussian packet whose polarization field is the local circular basis
/// vector of the packet's helicity. Support is the +-6 sigma box (clamped
/// away from kz <= 0, where the basis transport would break down).
[[nodiscard]] PhotonMode gaussian_helicity_mode(const GaussianPacket& p);

/// Beam with a fixed transverse circular polarization e0 = (1, i*helicity, 0)/sqrt(2),
/// made exactly transversal by the divergence-free completion
/// alpha(k) ~ e0 - z_hat (k_perp . e0)/kz, then normalized. This is the
/// momentum-space form of a paraxial beam carrying the first longitudinal
/// correction.
[[nodiscard]] PhotonMode paraxial_beam_mode(const GaussianPacket& p);

/// Rotated mode: amplitude f(R^T k), polarization R alpha(R^T k). The support
/// becomes the bounding box of the rotated corners (the amplitude callbacks
/// remain valid on the enlarged region).
[[nodiscard]] PhotonMode rotate_mode(const PhotonMode& mode, const Rotation3& r);

/// Norm integral of |f|^2 with the mode measure over the support (the sum of
/// weights for a discrete mode). Throws quad::QuadratureError when the
/// quadrature fails to converge. When `stats` is given, the run's diagnostics
/// are absorbed into it.
[[nodiscard]] double mode_norm(const PhotonMode& mode, const quad::QuadratureSpec& spec = {},
                               quad::QuadratureStats* stats = nullptr);

}  // namespace polfocus::modes
