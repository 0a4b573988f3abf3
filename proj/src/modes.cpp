#include "polfocus/modes.hpp"

#include <cmath>
#include <utility>

namespace polfocus::modes {

namespace {

constexpr double kUnitTol = 1e-12;
constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_converged_scalar(const quad::QuadratureResult<cplx>& r, const char* what) {
    if (!r.converged)
        throw quad::QuadratureError(std::string(what) + ": quadrature did not converge",
                                    r.error_estimate);
}

}  // namespace

HelicityBasis helicity_basis(const WaveVector& k) {
    const double n = norm(k);
    if (!(n > 0.0)) throw std::domain_error("helicity_basis: zero wave vector");
    const Vec3 u = (1.0 / n) * k;
    if (1.0 + u.z < 1e-14)
        throw std::domain_error("helicity_basis: transport undefined on the -z axis");

    // Minimal rotation taking z_hat to u, applied to (1, i, 0)/sqrt(2), in
    // closed form with mu = (ux + i uy)/(1 + uz).
    const cplx mu(u.x / (1.0 + u.z), u.y / (1.0 + u.z));
    const cplx i1(0.0, 1.0);
    HelicityBasis b;
    b.k_hat = u;
    b.eps_plus = kInvSqrt2 * CVec3{1.0 - mu * u.x, i1 - mu * u.y, -cplx(u.x, u.y)};
    b.eps_minus = conj(b.eps_plus);
    return b;
}

GaussianPacket GaussianPacket::from_spreads(double k0, double delta_r, double delta_z,
                                            int helicity) {
    if (!(k0 > 0.0) || !(delta_r > 0.0) || !(delta_z > 0.0))
        throw std::invalid_argument("GaussianPacket: k0, delta_r, delta_z must be positive");
    if (helicity != 1 && helicity != -1)
        throw std::invalid_argument("GaussianPacket: helicity must be +1 or -1");
    return GaussianPacket{k0, delta_r, delta_z, helicity};
}

GaussianPacket GaussianPacket::from_beam_radius(double k0, double tau, double delta_z,
                                                int helicity) {
    if (!(tau > 0.0)) throw std::invalid_argument("GaussianPacket: tau must be positive");
    return from_spreads(k0, 1.0 / tau, delta_z, helicity);
}

double gaussian_amplitude(const GaussianPacket& p, const WaveVector& k) {
    const double dz = (k.z - p.k0) / p.delta_z;
    const double r2 = (k.x * k.x + k.y * k.y) / (p.delta_r * p.delta_r);
    return std::exp(-0.5 * dz * dz - 0.5 * r2);
}

double omega_parameter(const GaussianPacket& p) { return p.delta_r / p.k0; }

PhotonMode PhotonMode::continuous(std::function<cplx(const WaveVector&)> amplitude,
                                  std::function<CVec3(const WaveVector&)> polarization,
                                  const quad::Box3& support) {
    if (!amplitude || !polarization)
        throw std::invalid_argument("PhotonMode: null evaluation callback");
    if (!(support.hi.x > support.lo.x) || !(support.hi.y > support.lo.y) ||
        !(support.hi.z > support.lo.z))
        throw std::invalid_argument("PhotonMode: support box must have positive extent");
    PhotonMode m;
    m.amplitude_ = std::move(amplitude);
    m.polarization_ = std::move(polarization);
    m.support_ = support;
    return m;
}

PhotonMode PhotonMode::discrete(std::vector<ModeAtom> atoms) {
    if (atoms.empty()) throw std::invalid_argument("PhotonMode: empty atom list");
    for (const auto& a : atoms) {
        if (!(a.weight >= 0.0)) throw std::invalid_argument("PhotonMode: negative atom weight");
        const double kn = norm(a.k);
        if (!(kn > 0.0)) throw std::domain_error("PhotonMode: atom at k = 0");
        if (std::abs(norm(a.polarization) - 1.0) > kUnitTol)
            throw std::domain_error("PhotonMode: atom polarization is not unit length");
        if (std::abs(dot(to_complex((1.0 / kn) * a.k), a.polarization)) > kUnitTol)
            throw std::domain_error("PhotonMode: atom polarization is not transversal");
    }
    PhotonMode m;
    m.atoms_ = std::move(atoms);
    return m;
}

PhotonMode plane_wave_mode(const WaveVector& k0, const CVec3& pol) {
    return PhotonMode::discrete({ModeAtom{1.0, k0, pol}});
}

namespace {

quad::Box3 packet_box(const GaussianPacket& p) {
    const double w = 6.0 * p.delta_r;
    // Keep the box clear of kz <= 0: the circular transport is undefined on
    // the -z axis and the beam form divides by kz. For any packet the
    // amplitude below 1e-3 k0 is astronomically small whenever this clamp acts.
    const double lo_z = std::max(p.k0 - 6.0 * p.delta_z, 1e-3 * p.k0);
    const double hi_z = p.k0 + 6.0 * p.delta_z;
    return quad::Box3{{-w, -w, lo_z}, {w, w, hi_z}};
}

}  // namespace

PhotonMode gaussian_helicity_mode(const GaussianPacket& p) {
    const GaussianPacket packet = GaussianPacket::from_spreads(p.k0, p.delta_r, p.delta_z,
                                                               p.helicity);
    const int sigma = packet.helicity;
    return PhotonMode::continuous(
        [packet](const WaveVector& k) { return cplx(gaussian_amplitude(packet, k), 0.0); },
        [sigma](const WaveVector& k) {
            const HelicityBasis b = helicity_basis(k);
            return sigma > 0 ? b.eps_plus : b.eps_minus;
        },
        packet_box(packet));
}

PhotonMode paraxial_beam_mode(const GaussianPacket& p) {
    const GaussianPacket packet = GaussianPacket::from_spreads(p.k0, p.delta_r, p.delta_z,
                                                               p.helicity);
    const cplx is(0.0, static_cast<double>(packet.helicity));
    return PhotonMode::continuous(
        [packet](const WaveVector& k) { return cplx(gaussian_amplitude(packet, k), 0.0); },
        [is](const WaveVector& k) {
            // e0 = (1, i sigma, 0)/sqrt(2); subtract the longitudinal piece that
            // the divergence-free condition k . alpha = 0 requires.
            const cplx kperp_dot_e0 = kInvSqrt2 * (k.x + is * k.y);
            const CVec3 unnorm{kInvSqrt2, kInvSqrt2 * is, -kperp_dot_e0 / k.z};
            return normalized(unnorm);
        },
        packet_box(packet));
}

PhotonMode rotate_mode(const PhotonMode& mode, const Rotation3& r) {
    if (mode.is_discrete()) {
        std::vector<ModeAtom> atoms;
        atoms.reserve(mode.atoms().size());
        for (const auto& a : mode.atoms())
            atoms.push_back(ModeAtom{a.weight, r.apply(a.k), r.apply(a.polarization)});
        return PhotonMode::discrete(std::move(atoms));
    }

    const quad::Box3& s = mode.support();
    Vec3 lo{1e300, 1e300, 1e300};
    Vec3 hi{-1e300, -1e300, -1e300};
    for (int corner = 0; corner < 8; ++corner) {
        const Vec3 c{(corner & 1) ? s.hi.x : s.lo.x, (corner & 2) ? s.hi.y : s.lo.y,
                     (corner & 4) ? s.hi.z : s.lo.z};
        const Vec3 rc = r.apply(c);
        lo = {std::min(lo.x, rc.x), std::min(lo.y, rc.y), std::min(lo.z, rc.z)};
        hi = {std::max(hi.x, rc.x), std::max(hi.y, rc.y), std::max(hi.z, rc.z)};
    }

    const Rotation3 rinv = r.transposed();
    // Copy the callbacks so the rotated mode owns its dependencies.
    auto amp = [mode, rinv](const WaveVector& k) { return mode.amplitude(rinv.apply(k)); };
    auto pol = [mode, r, rinv](const WaveVector& k) {
        return r.apply(mode.polarization(rinv.apply(k)));
    };
    return PhotonMode::continuous(std::move(amp), std::move(pol), quad::Box3{lo, hi});
}

double mode_norm(const PhotonMode& mode, const quad::QuadratureSpec& spec,
                 quad::QuadratureStats* stats) {
    if (mode.is_discrete()) {
        double total = 0.0;
        for (const auto& a : mode.atoms()) total += a.weight;
        return total;
    }
    const auto r = quad::integrate_box3(
        [&](const WaveVector& k) { return cplx(std::norm(mode.amplitude(k)), 0.0); },
        mode.support(), spec);
    if (stats) stats->absorb(r);
    require_converged_scalar(r, "mode_norm");
    return std::real(r.value);
}

}  // namespace polfocus::modes
