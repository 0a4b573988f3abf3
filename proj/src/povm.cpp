#include "polfocus/povm.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "polfocus/rng.hpp"

namespace polfocus::povm {

namespace {

constexpr double kUnitTol = 1e-9;

Vec3 require_unit_direction(const Vec3& j) {
    if (std::abs(norm(j) - 1.0) > kUnitTol) {
        throw std::domain_error("direction must be a unit vector");
    }
    return j;
}

const std::array<Vec3, 3> kAxes{Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}, Vec3{0.0, 0.0, 1.0}};

}  // namespace

DirectionDecomposition decompose_direction(const Vec3& j, const WaveVector& k) {
    const Vec3 unit = require_unit_direction(j);
    const modes::HelicityBasis basis = modes::helicity_basis(k);
    const CVec3 jc = to_complex(unit);
    DirectionDecomposition out;
    out.direction = unit;
    out.x_plus = dot(basis.eps_plus, jc);
    out.x_minus = dot(basis.eps_minus, jc);
    out.x_long = ::polfocus::dot(unit, basis.k_hat);
    return out;
}

CVec3 transversal_part(const Vec3& j, const WaveVector& k) {
    const Vec3 unit = require_unit_direction(j);
    const Vec3 u = normalized(k);  // throws domain_error for k = 0
    const double along = ::polfocus::dot(unit, u);
    return to_complex(unit - along * u);
}

double povm_expectation(const modes::PhotonMode& mode, const Vec3& j,
                        const quad::QuadratureSpec& spec) {
    const Vec3 unit = require_unit_direction(j);
    const double norm = modes::mode_norm(mode, spec);
    if (norm <= 0.0) {
        throw std::domain_error("mode has zero norm");
    }

    const auto overlap = [&unit](const WaveVector& k, const CVec3& pol) {
        const CVec3 b = transversal_part(unit, k);
        return std::norm(dot(b, conj(pol)));
    };

    if (mode.is_discrete()) {
        double sum = 0.0;
        for (const auto& atom : mode.atoms()) {
            sum += atom.weight * overlap(atom.k, atom.polarization);
        }
        return sum / norm;
    }

    const auto integrand = [&mode, &overlap](const Vec3& k) -> cplx {
        const cplx f = mode.amplitude(k);
        const double density = std::norm(f);
        if (density == 0.0) {
            return cplx{0.0, 0.0};
        }
        return cplx{density * overlap(k, mode.polarization(k)), 0.0};
    };

    const auto result = quad::integrate_box3(integrand, mode.support(), spec);
    if (!result.converged) {
        throw quad::QuadratureError("measurement expectation integral did not converge",
                                    result.error_estimate);
    }
    return result.value.real() / norm;
}

double completeness_defect(const WaveVector& k) {
    const Vec3 u = normalized(k);
    Matrix3c sum = Matrix3c::zero();
    for (const Vec3& axis : kAxes) {
        const CVec3 b = transversal_part(axis, k);
        sum = sum + outer(b, b);
    }
    const CVec3 uc = to_complex(u);
    const Matrix3c projector = Matrix3c::identity() - outer(uc, uc);
    return max_abs(sum - projector);
}

double direction_state_completeness_at(const WaveVector& k) {
    const modes::HelicityBasis basis = modes::helicity_basis(k);
    double worst = 0.0;

    Matrix3c resolution = Matrix3c::zero();
    for (const Vec3& axis : kAxes) {
        const DirectionDecomposition d = decompose_direction(axis, k);

        // Reconstruction of the direction from its circular coefficients.
        const CVec3 rebuilt = std::conj(d.x_plus) * basis.eps_plus +
                              std::conj(d.x_minus) * basis.eps_minus +
                              cplx{d.x_long, 0.0} * to_complex(basis.k_hat);
        const CVec3 residual = rebuilt - to_complex(axis);
        worst = std::max(worst, norm(residual));

        // Coefficient norm identity.
        const double norm2 = std::norm(d.x_plus) + std::norm(d.x_minus) + d.x_long * d.x_long;
        worst = std::max(worst, std::abs(norm2 - 1.0));

        resolution = resolution + outer(to_complex(axis), to_complex(axis));
    }

    worst = std::max(worst, max_abs(resolution - Matrix3c::identity()));
    return worst;
}

double direction_state_completeness(int samples, std::uint64_t seed) {
    if (samples <= 0) {
        throw std::invalid_argument("samples must be positive");
    }
    rng::SplitMix64 gen(seed);
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        Vec3 u = gen.next_unit_vector();
        // The circular basis is undefined near the -z axis; resample away
        // from it so the decomposition stays well conditioned.
        while (1.0 + u.z < 0.1) {
            u = gen.next_unit_vector();
        }
        worst = std::max(worst, direction_state_completeness_at(u));
        worst = std::max(worst, completeness_defect(u));
    }
    return worst;
}

}  // namespace polfocus::povm
