#include "polfocus/detector.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace polfocus::detector {

namespace {

constexpr double kUnitTol = 1e-12;

const std::array<Vec3, 3> kAxes{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}, Vec3{0.0, 0.0, 1.0}};

void check_scenario(const DetectorScenario& scenario, Wavefront expected) {
    if (scenario.wavefront != expected) {
        throw std::invalid_argument("detector: scenario wavefront does not match this model");
    }
    if (!(scenario.delta > 0.0)) {
        throw std::invalid_argument("detector: detection time must be positive");
    }
    if (expected == Wavefront::spherical_postlens && !(scenario.z0 > 0.0)) {
        throw std::invalid_argument("detector: plane position z0 must be positive");
    }
    if (norm(scenario.axis - Vec3{0.0, 0.0, 1.0}) > kUnitTol) {
        throw std::invalid_argument("detector: the detector plane normal must be +z");
    }
}

// Per-axis currents of the focused wave over the cap with the given angular
// weight. The three integrals run independently and must all converge.
std::array<double, 3> cap_currents(const lens::ConvergingSphericalWave& state,
                                   const std::function<double(double)>& weight,
                                   const quad::QuadratureSpec& spec, quad::QuadratureStats* stats) {
    std::array<double, 3> out{};
    for (int j = 0; j < 3; ++j) {
        const CVec3 axis = to_complex(kAxes[j]);
        const auto f = [&state, &axis](double theta, double phi) -> cplx {
            const CVec3 pol = state.ray_polarization(theta, phi);
            return cplx{std::norm(dot(pol, axis)), 0.0};
        };
        const auto result = quad::integrate_cap(f, state.theta_max, weight, spec);
        if (stats) stats->absorb(result);
        if (!result.converged) {
            throw quad::QuadratureError("detector: cap current integral did not converge",
                                        result.error_estimate);
        }
        out[j] = result.value.real();
    }
    return out;
}

std::array<double, 3> normalized(const std::array<double, 3>& w) {
    const double total = w[0] + w[1] + w[2];
    if (!(total > 0.0)) {
        throw std::domain_error("detector: currents have zero total");
    }
    return {w[0] / total, w[1] / total, w[2] / total};
}

PhotocurrentTriple as_triple(const std::array<double, 3>& currents) {
    const std::array<double, 3> p = normalized(currents);
    return PhotocurrentTriple{currents[0], currents[1], currents[2], p[0], p[1], p[2]};
}

}  // namespace

DetectorScenario DetectorScenario::planar(double delta) {
    if (!(delta > 0.0)) {
        throw std::invalid_argument("DetectorScenario: detection time must be positive");
    }
    DetectorScenario s;
    s.delta = delta;
    s.wavefront = Wavefront::planar_paraxial;
    return s;
}

DetectorScenario DetectorScenario::spherical(double z0, double delta) {
    if (!(z0 > 0.0)) {
        throw std::invalid_argument("DetectorScenario: z0 must be positive");
    }
    if (!(delta > 0.0)) {
        throw std::invalid_argument("DetectorScenario: detection time must be positive");
    }
    DetectorScenario s;
    s.z0 = z0;
    s.delta = delta;
    s.wavefront = Wavefront::spherical_postlens;
    return s;
}

std::array<double, 3> energy_fractions(const lens::ConvergingSphericalWave& state,
                                       const quad::QuadratureSpec& spec,
                                       quad::QuadratureStats* stats) {
    const auto weight = [&state](double theta) {
        const double e = state.strength(theta);
        return e * e * std::sin(theta);  // sin(theta) / cos^3(theta)
    };
    return normalized(cap_currents(state, weight, spec, stats));
}

PhotocurrentTriple photocurrents_spherical(const lens::ConvergingSphericalWave& state,
                                           const DetectorScenario& scenario,
                                           const quad::QuadratureSpec& spec,
                                           quad::QuadratureStats* stats) {
    check_scenario(scenario, Wavefront::spherical_postlens);
    // Rays at polar angle theta cross the plane obliquely; the oblique area
    // element replaces one energy-weight cosine with tan(theta), and the z0
    // spreading factor cancels against the plane's area element.
    const auto weight = [&state](double theta) {
        const double e = state.strength(theta);
        return e * e * std::tan(theta);  // sin(theta) / cos^4(theta)
    };
    std::array<double, 3> currents = cap_currents(state, weight, spec, stats);
    for (double& c : currents) {
        c *= scenario.delta;
    }
    return as_triple(currents);
}

PhotocurrentTriple photocurrents_planar(const modes::PhotonMode& beam,
                                        const DetectorScenario& scenario,
                                        const quad::QuadratureSpec& spec,
                                        quad::QuadratureStats* stats) {
    check_scenario(scenario, Wavefront::planar_paraxial);

    std::array<double, 3> currents{};
    for (int j = 0; j < 3; ++j) {
        const CVec3 axis = to_complex(kAxes[j]);
        if (beam.is_discrete()) {
            double sum = 0.0;
            for (const auto& atom : beam.atoms()) {
                sum += atom.weight * std::norm(dot(atom.polarization, axis));
            }
            currents[j] = scenario.delta * sum;
        } else {
            const auto f = [&beam, &axis](const WaveVector& k) -> cplx {
                const cplx amp = beam.amplitude(k);
                const double density = std::norm(amp);
                if (density == 0.0) {
                    return cplx{0.0, 0.0};
                }
                return cplx{density * std::norm(dot(beam.polarization(k), axis)), 0.0};
            };
            const auto result = quad::integrate_box3(f, beam.support(), spec);
            if (stats) stats->absorb(result);
            if (!result.converged) {
                throw quad::QuadratureError("detector: planar current integral did not converge",
                                            result.error_estimate);
            }
            currents[j] = scenario.delta * result.value.real();
        }
    }
    return as_triple(currents);
}

double detection_discrepancy(double theta_max, const quad::QuadratureSpec& spec,
                             quad::QuadratureStats* stats) {
    if (!(theta_max > 0.0) || theta_max > 1.0) {
        throw std::domain_error("detection_discrepancy: theta_max must lie in (0, 1]");
    }
    const lens::ConvergingSphericalWave state{theta_max, lens::circular_polarization(+1)};
    const PhotocurrentTriple currents =
        photocurrents_spherical(state, DetectorScenario::spherical(), spec, stats);
    const DensityMatrix3 rho = lens::lens_density(state, spec, stats);

    const std::array<double, 3> p{currents.p_x, currents.p_y, currents.p_z};
    double worst = 0.0;
    for (int j = 0; j < 3; ++j) {
        worst = std::max(worst, std::abs(p[j] - rho(j, j).real()));
    }
    return worst;
}

double detector_p_z_closed_form(double theta_max) {
    if (!(theta_max > 0.0) || theta_max > 1.45) {
        throw std::domain_error("detector_p_z_closed_form: theta_max must lie in (0, 1.45]");
    }
    const double sec = 1.0 / std::cos(theta_max);
    const double cubic = (sec * sec * sec - 1.0) / 3.0;
    return (cubic - (sec - 1.0)) / (2.0 * cubic);
}

}  // namespace polfocus::detector
