#pragma once

#include <array>

#include "polfocus/lens.hpp"
#include "polfocus/modes.hpp"
#include "polfocus/quad.hpp"
#include "polfocus/types.hpp"

namespace polfocus::detector {

/// Shape of the field arriving at the detector plane.
enum class Wavefront { planar_paraxial, spherical_postlens };

/// Geometry of a polarization-selective planar detector. The plane normal is
/// the +z axis; z0 is the distance behind the focus (spherical case) and
/// delta the detection time. Both cancel in every normalized probability and
/// are carried only so raw currents have definite units.
struct DetectorScenario {
    Vec3 axis{0.0, 0.0, 1.0};
    double z0 = 1.0;
    double delta = 1.0;
    Wavefront wavefront = Wavefront::spherical_postlens;

    [[nodiscard]] static DetectorScenario planar(double delta = 1.0);
    [[nodiscard]] static DetectorScenario spherical(double z0 = 1.0, double delta = 1.0);
};

/// Raw photocurrents per Cartesian absorption direction and the normalized
/// detection probabilities p_j = I_j / (I_x + I_y + I_z).
struct PhotocurrentTriple {
    double i_x = 0.0;
    double i_y = 0.0;
    double i_z = 0.0;
    double p_x = 0.0;
    double p_y = 0.0;
    double p_z = 0.0;
};

/// Normalized energy fractions (W_x, W_y, W_z)/W of the focused wave, from
/// per-axis scalar integrals over the cap with weight sin(theta)/cos^3(theta).
/// They reproduce the diagonal of lens_density through an independent code
/// path. Throws quad::QuadratureError on non-convergence.
[[nodiscard]] std::array<double, 3> energy_fractions(const lens::ConvergingSphericalWave& state,
                                                     const quad::QuadratureSpec& spec = {},
                                                     quad::QuadratureStats* stats = nullptr);

/// Photocurrents of a planar detector behind the focus of a converging
/// spherical wave. The oblique ray geometry turns the energy weight
/// sin(theta)/cos^3(theta) into the current weight sin(theta)/cos^4(theta),
/// which is what separates p_j from the energy fraction W_j/W at fourth order
/// in the aperture angle. z0 cancels; delta scales the raw currents only.
[[nodiscard]] PhotocurrentTriple photocurrents_spherical(
    const lens::ConvergingSphericalWave& state,
    const DetectorScenario& scenario = DetectorScenario::spherical(),
    const quad::QuadratureSpec& spec = {}, quad::QuadratureStats* stats = nullptr);

/// Photocurrents of a planar detector intercepting a paraxial beam travelling
/// along +z. For planar wavefronts the current and energy integrals coincide,
/// so p_j equals the jj diagonal of the beam's effective density matrix.
[[nodiscard]] PhotocurrentTriple photocurrents_planar(
    const modes::PhotonMode& beam,
    const DetectorScenario& scenario = DetectorScenario::planar(),
    const quad::QuadratureSpec& spec = {}, quad::QuadratureStats* stats = nullptr);

/// max_j |p_j - rho_jj| between the spherical-detector probabilities and the
/// focused-state density diagonal for circular input; scales as theta_max^4.
/// Requires 0 < theta_max <= 1.0.
[[nodiscard]] double detection_discrepancy(double theta_max, const quad::QuadratureSpec& spec = {},
                                           quad::QuadratureStats* stats = nullptr);

/// Closed form of the spherical-detector p_z for circular input:
/// {(sec^3 - 1)/3 - (sec - 1)} / {2 (sec^3 - 1)/3} with sec = 1/cos(theta_max).
[[nodiscard]] double detector_p_z_closed_form(double theta_max);

}  // namespace polfocus::detector
