#include "shocklayer/twofluid.hpp"

#include <algorithm>
#include <cmath>

namespace shocklayer {

void SpeciesSpec::validate() const {
    if (!(m_e > 0.0) || !(m_i > 0.0)) throw ConfigError("species: masses must be positive");
    if (!(m_e < m_i)) throw ConfigError("species: m_e must be smaller than m_i");
    if (!(e_charge > 0.0)) throw ConfigError("species: e_charge must be positive");
    if (collision == CollisionModel::constant_frequency && !(f1 > 0.0))
        throw ConfigError("species: f1 must be positive");
    if (collision == CollisionModel::proportional_to_density && !(c1 > 0.0))
        throw ConfigError("species: c1 must be positive");
}

double SpeciesSpec::collision_frequency(double nu) const {
    if (collision == CollisionModel::proportional_to_density) return c1 * nu;
    return f1;
}

std::pair<double, double> partition_density(double rho, std::pair<double, double> gammas) {
    const auto [g1, g2] = gammas;
    if (g1 == g2) throw ConfigError("partition_density: degenerate species, gamma_1 == gamma_2");
    const double rho1 = g2 / (g2 - g1) * rho;
    const double rho2 = g1 / (g1 - g2) * rho;
    return {rho1, rho2};
}

std::pair<Vec3, Vec3> diffusion_velocities(const Vec3& current, double rho,
                                           std::pair<double, double> gammas) {
    const auto [g1, g2] = gammas;
    if (!(rho > 0.0)) throw DomainError("diffusion_velocities: rho must be positive");
    if (g1 == 0.0 || g2 == 0.0) throw ConfigError("diffusion_velocities: gammas must be nonzero");
    const Vec3 w1 = -current / (g2 * rho);
    const Vec3 w2 = -current / (g1 * rho);
    // reconstruction check: i = (g1 g2/(g2 - g1)) (w1 - w2) rho
    const Vec3 rec = (g1 * g2 / (g2 - g1)) * (w1 - w2) * rho;
    const double scale = std::max(current.norm(), 1.0);
    if ((rec - current).norm() > 1e-12 * scale)
        throw NumericError("diffusion_velocities: current reconstruction check failed");
    return {w1, w2};
}

TransportCoefficients transport_coefficients(const SpeciesSpec& spec, double rho, double nu,
                                             double mass_flux) {
    const double f = spec.collision_frequency(nu);
    if (!(f > 0.0) || !(nu > 0.0))
        throw DomainError("transport_coefficients: collision frequency and nu must be positive");
    const double ge = spec.gamma_e();
    const double gi = spec.gamma_i();

    TransportCoefficients out;
    out.alpha12 = -spec.m_e * nu * f;
    const double ratio = ge * gi / (gi - ge);
    out.sigma = -(ratio * ratio) * rho * rho / out.alpha12;
    out.hall = (ge + gi) * ge * gi / ((gi - ge) * (gi - ge)) * rho / out.alpha12;
    out.beta = -1.0 / (ge * gi * mass_flux);
    return out;
}

DerivedLayerCoefficients derived_layer_coefficients(const SpeciesSpec& spec, double rho_upstream,
                                                    double mass_flux) {
    const double nu = rho_upstream / (spec.m_e + spec.m_i);
    const auto tc = transport_coefficients(spec, rho_upstream, nu, mass_flux);
    const double ge = spec.gamma_e();
    const double gi = spec.gamma_i();
    DerivedLayerCoefficients out;
    out.sigma = tc.sigma;
    out.chi = (ge + gi) / (ge * gi * mass_flux);
    out.beta = tc.beta;
    return out;
}

Vec3 ohm_residual(const PlasmaState& state, const ModelParams& params) {
    const double u_rel = state.u - params.frame_speed;
    if (!(u_rel > 0.0)) throw DomainError("ohm_residual: wave-frame velocity must be positive");
    const Vec3 current(0.0, -state.zeta3 / (u_rel * params.mu_e),
                       state.zeta2 / (u_rel * params.mu_e));
    const Vec3 E(params.E1, params.E2, params.E3);
    const Vec3 vel(state.u, state.v, state.w);
    const Vec3 B(params.B1, state.B2, state.B3);
    return current - params.sigma * (E + vel.cross(B)) + params.chi * current.cross(B);
}

std::pair<double, double> joule_identity_check(const Vec3& current, const Vec3& E, const Vec3& u,
                                               const Vec3& B, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("joule_identity_check: sigma must be positive");
    const double lhs = current.dot(E + u.cross(B));
    const double rhs = current.squaredNorm() / sigma;
    return {lhs, rhs};
}

namespace {

// piecewise-linear sample interpolation on [x_i, x_{i+1}]
inline double lerp(double a, double b, double t) { return a + (b - a) * t; }

}  // namespace

TemperatureSplit temperature_split(std::span<const double> x, std::span<const double> u,
                                   std::span<const double> T, std::span<const double> f,
                                   double m_e, double m_i) {
    const std::size_t n = x.size();
    if (n < 2 || u.size() != n || T.size() != n || f.size() != n)
        throw ConfigError("temperature_split: need >= 2 aligned samples");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(x[i + 1] > x[i])) throw ConfigError("temperature_split: x must be strictly increasing");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(u[i] > 0.0)) throw DomainError("temperature_split: u must be positive on the grid");
        if (!(T[i] > 0.0)) throw DomainError("temperature_split: T must be positive on the grid");
    }

    // the upstream boundary condition T_e(-inf) = T(-inf) needs a settled inflow
    double T_range = 0.0;
    for (std::size_t i = 0; i < n; ++i) T_range = std::max(T_range, std::abs(T[i] - T[0]));
    const std::size_t head = std::max<std::size_t>(2, n / 50);
    for (std::size_t i = 0; i < head; ++i) {
        if (std::abs(T[i] - T[0]) > 1e-6 * std::max(std::abs(T[0]), 1.0) + 1e-3 * T_range)
            throw NumericError("temperature_split: upstream is not an equilibrium of the relaxation law");
    }

    TemperatureSplit out;
    out.T_e.resize(n);
    out.T_i.resize(n);
    out.T_e[0] = T[0];

    const double mass_ratio = 4.0 * m_e / m_i;  // 2 m_e/m_i with T_i - T_e = 2 (T - T_e)
    double Te = T[0];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = x[i + 1] - x[i];
        // rate a(x) = 4 m_e f / (m_i u); substep when a h is large so RK4 stays stable
        const double a0 = mass_ratio * f[i] / u[i];
        const double a1 = mass_ratio * f[i + 1] / u[i + 1];
        const double a_max = std::max(a0, a1);
        const int n_sub = std::clamp(static_cast<int>(std::ceil(a_max * h / 2.0)), 1, 20000);
        const double hs = h / n_sub;
        auto rhs = [&](double t, double Te_val) {
            const double a = lerp(a0, a1, t);
            const double Tm = lerp(T[i], T[i + 1], t);
            return a * (Tm - Te_val);
        };
        for (int k = 0; k < n_sub; ++k) {
            const double t0 = static_cast<double>(k) / n_sub;
            const double th = (k + 0.5) / n_sub;
            const double t1 = static_cast<double>(k + 1) / n_sub;
            const double k1 = rhs(t0, Te);
            const double k2 = rhs(th, Te + 0.5 * hs * k1);
            const double k3 = rhs(th, Te + 0.5 * hs * k2);
            const double k4 = rhs(t1, Te + hs * k3);
            Te += hs / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.T_e[i + 1] = Te;
    }
    for (std::size_t i = 0; i < n; ++i) out.T_i[i] = 2.0 * T[i] - out.T_e[i];
    return out;
}

TemperatureSplit temperature_split(std::span<const double> x, std::span<const double> u,
                                   std::span<const double> T, const SpeciesSpec& spec) {
    spec.validate();
    if (spec.collision != CollisionModel::constant_frequency)
        throw ConfigError("temperature_split: density-dependent collisions need an explicit f grid");
    std::vector<double> f(x.size(), spec.f1);
    return temperature_split(x, u, T, f, spec.m_e, spec.m_i);
}

SpeciesView species_view(const PlasmaState& state, const ModelParams& params,
                         const SpeciesSpec& spec) {
    (void)spec;
    const double rho = density(state, params);
    const double ge = params.gamma_e;
    const double gi = params.gamma_i;
    SpeciesView view;
    view.rho_e = gi / (gi - ge) * rho;
    view.rho_i = ge / (ge - gi) * rho;
    const double u_rel = state.u - params.frame_speed;
    const Vec3 current(0.0, -state.zeta3 / (u_rel * params.mu_e),
                       state.zeta2 / (u_rel * params.mu_e));
    if (rho > 0.0) {
        view.w_e = -current / (gi * rho);
        view.w_i = -current / (ge * rho);
    }
    view.rho_ee = ge * gi / (gi - ge) * rho;
    view.rho_ei = -view.rho_ee;
    return view;
}

}  // namespace shocklayer
