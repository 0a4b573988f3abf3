#include "polfocus/reduce.hpp"

#include <cmath>

namespace polfocus::reduce {

namespace {

/// Validation tolerance for matrices assembled by quadrature: ten times the
/// quadrature tolerance (integration error perturbs trace and eigenvalues
/// at first order).
double validation_tolerance(const quad::QuadratureSpec& spec) {
    return 10.0 * std::max(spec.rel_tol, spec.abs_tol);
}

template <typename T>
void require_converged(const quad::QuadratureResult<T>& r, const char* what) {
    if (!r.converged)
        throw quad::QuadratureError(std::string(what) + ": quadrature did not converge",
                                    r.error_estimate);
}

}  // namespace

DensityMatrix3 effective_density(const modes::PhotonMode& mode, const quad::QuadratureSpec& spec,
                                 quad::QuadratureStats* stats) {
    if (mode.is_discrete()) {
        std::vector<std::pair<double, CVec3>> samples;
        samples.reserve(mode.atoms().size());
        for (const auto& a : mode.atoms()) samples.emplace_back(a.weight, a.polarization);
        return DensityMatrix3::from_weighted_outer_products(samples);
    }

    // Normalize inside the integrand rather than after the fact: with the
    // weight divided out, every matrix entry is an O(1) integral, so the
    // absolute tolerance (and the roundoff floor) stay meaningful no matter
    // what physical scale the mode carries.
    const double n = modes::mode_norm(mode, spec, stats);
    if (!(n > 0.0)) throw std::invalid_argument("effective_density: zero mode norm");
    const double inv_n = 1.0 / n;
    const auto num = quad::integrate_box3(
        [&](const WaveVector& k) {
            const CVec3 a = mode.polarization(k);
            return (inv_n * std::norm(mode.amplitude(k))) * outer(a, a);
        },
        mode.support(), spec);
    if (stats) stats->absorb(num);
    require_converged(num, "effective_density");
    return DensityMatrix3::checked(num.value, validation_tolerance(spec));
}

Matrix2c naive_reduced_2x2(const modes::PhotonMode& mode, const quad::QuadratureSpec& spec,
                           quad::QuadratureStats* stats) {
    // Helicity components f_sigma(k) = f(k) <eps_sigma(k), alpha(k)>.
    auto component = [](const WaveVector& k, const CVec3& pol, int sigma) {
        const modes::HelicityBasis b = modes::helicity_basis(k);
        return inner(sigma > 0 ? b.eps_plus : b.eps_minus, pol);
    };

    Matrix2c m;
    if (mode.is_discrete()) {
        double total = 0.0;
        for (const auto& a : mode.atoms()) {
            const cplx fp = component(a.k, a.polarization, +1);
            const cplx fm = component(a.k, a.polarization, -1);
            m(0, 0) += a.weight * std::norm(fp);
            m(1, 1) += a.weight * std::norm(fm);
            m(0, 1) += a.weight * fp * std::conj(fm);
            total += a.weight;
        }
        if (!(total > 0.0)) throw std::invalid_argument("naive_reduced_2x2: zero mode norm");
        const cplx scale(1.0 / total, 0.0);
        for (auto& e : m.a) e *= scale;
    } else {
        // Normalize inside the integrand (see effective_density): the
        // cross-helicity entries of a pure-helicity mode are numerically
        // zero, and only an O(1)-scaled integrand lets the absolute
        // tolerance dispose of them instead of subdividing forever.
        const double total = modes::mode_norm(mode, spec, stats);
        if (!(total > 0.0)) throw std::invalid_argument("naive_reduced_2x2: zero mode norm");
        const double inv = 1.0 / total;
        auto entry = [&](int sa, int sb) {
            const auto r = quad::integrate_box3(
                [&](const WaveVector& k) {
                    const double w = inv * std::norm(mode.amplitude(k));
                    const CVec3 pol = mode.polarization(k);
                    return w * component(k, pol, sa) * std::conj(component(k, pol, sb));
                },
                mode.support(), spec);
            if (stats) stats->absorb(r);
            require_converged(r, "naive_reduced_2x2");
            return r.value;
        };
        m(0, 0) = entry(+1, +1);
        m(1, 1) = entry(-1, -1);
        m(0, 1) = entry(+1, -1);
    }
    m(1, 0) = std::conj(m(0, 1));
    return m;
}

namespace {

DensityMatrix3 circular_block_density(double zz_weight, int helicity) {
    if (helicity != 1 && helicity != -1)
        throw std::invalid_argument("series density: helicity must be +1 or -1");
    const double t = 1.0 - zz_weight;
    Matrix3c m;
    m(0, 0) = m(1, 1) = 0.5 * t;
    m(0, 1) = cplx(0.0, -0.5 * t * helicity);
    m(1, 0) = cplx(0.0, 0.5 * t * helicity);
    m(2, 2) = zz_weight;
    return DensityMatrix3::checked(m, 1e-12);
}

}  // namespace

DensityMatrix3 paraxial_series_density(double omega, int helicity) {
    if (!(omega >= 0.0) || !(omega < 0.3))
        throw std::domain_error("paraxial_series_density: omega must lie in [0, 0.3)");
    return circular_block_density(0.5 * omega * omega, helicity);
}

double paraxial_series_error_probability(double omega) {
    if (!(omega >= 0.0) || !(omega < 0.3))
        throw std::domain_error("paraxial_series_error_probability: omega must lie in [0, 0.3)");
    return 0.5 * omega * omega;
}

double omega_from_density(const DensityMatrix3& rho) {
    const double zz = std::max(0.0, std::real(rho(2, 2)));
    return std::sqrt(2.0 * zz);
}

Vec3 mean_wave_direction(const modes::PhotonMode& mode, const quad::QuadratureSpec& spec) {
    if (mode.is_discrete()) {
        Vec3 acc{};
        for (const auto& a : mode.atoms()) acc = acc + a.weight * normalized(a.k);
        return normalized(acc);
    }
    auto moment = [&](auto pick) {
        const auto r = quad::integrate_box3(
            [&](const WaveVector& k) {
                return cplx(std::norm(mode.amplitude(k)) * pick(normalized(k)), 0.0);
            },
            mode.support(), spec);
        require_converged(r, "mean_wave_direction");
        return std::real(r.value);
    };
    const Vec3 m{moment([](const Vec3& u) { return u.x; }),
                 moment([](const Vec3& u) { return u.y; }),
                 moment([](const Vec3& u) { return u.z; })};
    return normalized(m);
}

double block_residual(const DensityMatrix3& rho, const Vec3& axis) {
    const Rotation3 r = Rotation3::between(normalized(axis), Vec3{0.0, 0.0, 1.0});
    const Matrix3c rc = r.complex_matrix();
    const Matrix3c m = rc * rho.matrix() * adjoint(rc);
    return std::max(std::abs(m(0, 2)), std::abs(m(1, 2)));
}

}  // namespace polfocus::reduce
