#include <cmath>
#include <cstdint>
#include <vector>

#include "doctest.h"
#include "polfocus/modes.hpp"

using namespace polfocus;
using namespace polfocus::modes;

namespace {

constexpr double kPi = 3.14159265358979323846;

// SplitMix64: tiny deterministic generator for sampling test directions.
struct SplitMix64 {
    std::uint64_t state;
    double next_unit() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return static_cast<double>(z >> 11) * 0x1.0p-53;
    }
};

const CVec3 kCircPlus{cplx{1.0 / std::sqrt(2.0), 0.0}, cplx{0.0, 1.0 / std::sqrt(2.0)},
                      cplx{0.0, 0.0}};

}  // namespace

TEST_SUITE("modes") {
    TEST_CASE("helicity basis: closed form at the pole and on the equator") {
        const HelicityBasis pole = helicity_basis(WaveVector{0.0, 0.0, 2.5});
        CHECK(norm(pole.eps_plus - kCircPlus) < 1e-15);
        CHECK(norm(pole.eps_minus - conj(kCircPlus)) < 1e-15);

        const HelicityBasis equator = helicity_basis(WaveVector{3.0, 0.0, 0.0});
        const double s = 1.0 / std::sqrt(2.0);
        const CVec3 expected{cplx{0.0, 0.0}, cplx{0.0, s}, cplx{-s, 0.0}};
        CHECK(norm(equator.eps_plus - expected) < 1e-14);
        CHECK(norm(equator.eps_minus - conj(expected)) < 1e-14);
    }

    TEST_CASE("helicity basis: transversality and orthonormality on random directions") {
        SplitMix64 rng{0x6d6f646573ULL};
        double worst = 0.0;
        for (int i = 0; i < 10000; ++i) {
            const double z = -0.89 + 1.89 * rng.next_unit();  // stay off the -z axis
            const double phi = 2.0 * kPi * rng.next_unit();
            const double s = std::sqrt(1.0 - z * z);
            const double scale = 0.1 + 10.0 * rng.next_unit();
            const WaveVector k{scale * s * std::cos(phi), scale * s * std::sin(phi), scale * z};
            const HelicityBasis basis = helicity_basis(k);

            worst = std::max(worst, std::abs(dot(to_complex(k), basis.eps_plus)) / scale);
            worst = std::max(worst, std::abs(dot(to_complex(k), basis.eps_minus)) / scale);
            worst = std::max(worst, std::abs(norm(basis.eps_plus) - 1.0));
            worst = std::max(worst, std::abs(norm(basis.eps_minus) - 1.0));
            worst = std::max(worst, std::abs(inner(basis.eps_plus, basis.eps_minus)));
            worst = std::max(worst, norm(basis.eps_minus - conj(basis.eps_plus)));
            worst = std::max(worst, norm(basis.k_hat - normalized(k)));
        }
        CHECK(worst <= 1e-12);
    }

    TEST_CASE("helicity basis: transport is smooth away from the -z axis") {
        const HelicityBasis a = helicity_basis(WaveVector{0.3, -0.2, 0.9});
        const HelicityBasis b = helicity_basis(WaveVector{0.3 + 1e-7, -0.2, 0.9});
        CHECK(norm(a.eps_plus - b.eps_plus) < 1e-6);
    }

    TEST_CASE("helicity basis: domain guards") {
        CHECK_THROWS_AS(helicity_basis(WaveVector{0.0, 0.0, 0.0}), std::domain_error);
        CHECK_THROWS_AS(helicity_basis(WaveVector{0.0, 0.0, -1.0}), std::domain_error);
    }

    TEST_CASE("gaussian packet: amplitude profile and omega") {
        const GaussianPacket p = GaussianPacket::from_spreads(10.0, 0.5, 0.2, +1);
        CHECK(gaussian_amplitude(p, WaveVector{0.0, 0.0, 10.0}) ==
              doctest::Approx(1.0).epsilon(1e-15));
        CHECK(gaussian_amplitude(p, WaveVector{0.5, 0.0, 10.0}) ==
              doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
        CHECK(gaussian_amplitude(p, WaveVector{0.0, 0.0, 10.2}) ==
              doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
        CHECK(omega_parameter(p) == doctest::Approx(0.05).epsilon(1e-15));

        const GaussianPacket q = GaussianPacket::from_beam_radius(10.0, 4.0, 0.2, -1);
        CHECK(q.delta_r == doctest::Approx(0.25).epsilon(1e-15));
        CHECK(q.helicity == -1);
        CHECK(q.paraxial());
        CHECK_FALSE(GaussianPacket::from_spreads(10.0, 1.5, 0.2, +1).paraxial());

        CHECK_THROWS_AS(GaussianPacket::from_spreads(-1.0, 0.5, 0.2, +1), std::invalid_argument);
        CHECK_THROWS_AS(GaussianPacket::from_spreads(10.0, 0.5, 0.2, 2), std::invalid_argument);
        CHECK_THROWS_AS(GaussianPacket::from_beam_radius(10.0, 0.0, 0.2, 1),
                        std::invalid_argument);
    }

    TEST_CASE("plane-wave mode: atoms validate length and transversality") {
        CHECK_NOTHROW(plane_wave_mode(WaveVector{0.0, 0.0, 5.0}, kCircPlus));
        const CVec3 longitudinal{cplx{0.0, 0.0}, cplx{0.0, 0.0}, cplx{1.0, 0.0}};
        CHECK_THROWS_AS(plane_wave_mode(WaveVector{0.0, 0.0, 5.0}, longitudinal),
                        std::domain_error);
        const CVec3 overlong{cplx{1.0, 0.0}, cplx{0.5, 0.0}, cplx{0.0, 0.0}};
        CHECK_THROWS_AS(plane_wave_mode(WaveVector{0.0, 0.0, 5.0}, overlong), std::domain_error);
        CHECK_THROWS_AS(plane_wave_mode(WaveVector{0.0, 0.0, 0.0}, kCircPlus), std::domain_error);
    }

    TEST_CASE("mode norms: discrete sums and the Gaussian integral") {
        std::vector<ModeAtom> atoms;
        atoms.push_back(ModeAtom{0.75, WaveVector{0.0, 0.0, 5.0}, kCircPlus});
        atoms.push_back(
            ModeAtom{0.5, WaveVector{2.0, 0.0, 0.0},
                     CVec3{cplx{0.0, 0.0}, cplx{1.0, 0.0}, cplx{0.0, 0.0}}});
        const PhotonMode mode = PhotonMode::discrete(atoms);
        CHECK(mode_norm(mode) == doctest::Approx(1.25).epsilon(1e-15));

        const GaussianPacket p = GaussianPacket::from_spreads(1.0, 0.05, 0.02, +1);
        quad::QuadratureSpec spec;
        spec.rel_tol = 1e-8;
        spec.abs_tol = 1e-16;
        quad::QuadratureStats stats;
        const double n = mode_norm(gaussian_helicity_mode(p), spec, &stats);
        const double exact =
            std::pow(kPi, 1.5) * p.delta_r * p.delta_r * p.delta_z / std::pow(2.0 * kPi, 3.0);
        CHECK(n == doctest::Approx(exact).epsilon(1e-6));
        CHECK(stats.converged);
        CHECK(stats.error_estimate > 0.0);
    }

    TEST_CASE("gaussian helicity mode: polarization field follows the local basis") {
        const GaussianPacket p = GaussianPacket::from_spreads(1.0, 0.05, 0.02, -1);
        const PhotonMode mode = gaussian_helicity_mode(p);
        const WaveVector k{0.03, -0.02, 1.01};
        CHECK(norm(mode.polarization(k) - helicity_basis(k).eps_minus) < 1e-14);
        CHECK(std::abs(mode.amplitude(k) - cplx{gaussian_amplitude(p, k), 0.0}) < 1e-14);
        CHECK(mode.support().lo.z > 0.0);  // clamped away from the transport singularity
    }

    TEST_CASE("paraxial beam mode: exact transversality with fixed transverse label") {
        const GaussianPacket p = GaussianPacket::from_spreads(1.0, 0.05, 0.02, +1);
        const PhotonMode beam = paraxial_beam_mode(p);
        for (const WaveVector& k :
             {WaveVector{0.02, 0.01, 0.98}, WaveVector{-0.07, 0.03, 1.04}}) {
            const CVec3 alpha = beam.polarization(k);
            CHECK(std::abs(dot(to_complex(k), alpha)) < 1e-14);
            CHECK(std::abs(norm(alpha) - 1.0) < 1e-14);
            // The transverse part stays proportional to the circular label.
            const cplx overlap = inner(kCircPlus, alpha);
            CHECK(std::abs(overlap) > 0.99);
        }
    }

    TEST_CASE("rotated modes: pullback of amplitude, pushforward of polarization") {
        const PhotonMode mode = plane_wave_mode(WaveVector{0.0, 0.0, 5.0}, kCircPlus);
        const Rotation3 r = Rotation3::about_axis(Vec3{0.0, 1.0, 0.0}, kPi / 2.0);
        const PhotonMode rotated = rotate_mode(mode, r);
        REQUIRE(rotated.is_discrete());
        const ModeAtom& atom = rotated.atoms().front();
        CHECK(norm(atom.k - WaveVector{5.0, 0.0, 0.0}) < 1e-14);
        CHECK(norm(atom.polarization - r.apply(kCircPlus)) < 1e-14);
        CHECK(std::abs(dot(to_complex(atom.k), atom.polarization)) < 1e-13);
    }
}
