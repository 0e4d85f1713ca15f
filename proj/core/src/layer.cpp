#include "shocklayer/layer.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace shocklayer {

namespace {

void require_positive_coefficients(const ModelParams& p) {
    if (!(p.eta > 0.0) || !(p.mu_visc > 0.0) || !(p.kappa > 0.0) || !(p.beta > 0.0) ||
        !(p.sigma > 0.0))
        throw ConfigError(
            "LayerSystem: eta, mu_visc, kappa, beta, sigma must all be strictly positive");
}

}  // namespace

LayerSystem::LayerSystem(ModelParams params, EosSpec eos)
    : params_(std::move(params)), eos_(std::move(eos)) {
    params_.validate();
    eos_.validate();
    require_positive_coefficients(params_);
}

LayerSystem::LayerSystem(ModelParams params, EosSpec eos, const FluxConstants& constants)
    : LayerSystem(
          [&] {
              ModelParams p = params;
              p.M = constants.M;
              p.P = constants.P;
              p.P2star = constants.P2star;
              p.P3star = constants.P3star;
              p.C = constants.C;
              p.E2 = constants.E2;
              p.E3 = constants.E3;
              p.B1 = constants.B1;
              return p;
          }(),
          std::move(eos)) {}

LayerSystem LayerSystem::rescaled_dissipation(double t) const {
    if (!(t > 0.0)) throw ConfigError("rescaled_dissipation: multiplier must be positive");
    ModelParams p = params_;
    p.eta *= t;
    p.mu_visc *= t;
    p.kappa *= t;
    p.beta *= t;
    p.sigma /= t;  // resistivity 1/sigma scales with t
    p.D_R *= t;
    return LayerSystem(p, eos_);
}

double energy_bracket(const PlasmaState& y, const LayerSystem& sys) {
    const ModelParams& p = sys.params();
    const double s = p.frame_speed;
    const double Um = internal_energy(y.T, sys.eos());
    const double ER = p.a_R * y.T * y.T * y.T * y.T;
    const double Bperp2 = y.B2 * y.B2 + y.B3 * y.B3;
    const double zeta2sq = y.zeta2 * y.zeta2 + y.zeta3 * y.zeta3;
    return p.M * (Um + p.phi) + ER - 0.5 * p.M * (y.u * y.u + y.v * y.v + y.w * y.w) -
           (y.u + s) / (2.0 * p.mu_e) * Bperp2 + (y.v / p.mu_e) * p.B1 * y.B2 +
           (y.w / p.mu_e) * p.B1 * y.B3 + p.P * y.u + p.P2star * y.v + p.P3star * y.w +
           0.5 * p.beta / (p.mu_e * p.mu_e) * zeta2sq -
           (p.E3 * y.B2 - p.E2 * y.B3) / p.mu_e - p.C;
}

StateDerivative rhs(const PlasmaState& y, const LayerSystem& sys) {
    const ModelParams& p = sys.params();
    const double u_rel = y.u - p.frame_speed;
    if (!(u_rel > 0.0)) throw DomainError("layer rhs: wave-frame velocity must be positive");
    if (!(y.T > 0.0)) throw DomainError("layer rhs: T must be positive");

    const double rho = p.M / u_rel;
    const double p_t = gas_pressure(rho, y.T, sys.eos()) + (p.a_R / 3.0) * std::pow(y.T, 4);
    const double Bperp2 = y.B2 * y.B2 + y.B3 * y.B3;

    StateDerivative d;
    d.v = (p.M * y.v - p.B1 * y.B2 / p.mu_e - p.P2star) / p.mu_visc;
    d.w = (p.M * y.w - p.B1 * y.B3 / p.mu_e - p.P3star) / p.mu_visc;
    d.u = (Bperp2 / (2.0 * p.mu_e) + p.M * y.u - p.P + p_t) / p.eta;
    d.B2 = y.zeta2 / u_rel;
    d.B3 = y.zeta3 / u_rel;
    d.zeta2 = (p.E3 + (y.u * y.B2 - y.v * p.B1) - p.chi * p.B1 * y.zeta3 -
               y.zeta2 / (p.sigma * u_rel)) /
              (p.beta * u_rel);
    d.zeta3 = (-p.E2 + (y.u * y.B3 - y.w * p.B1) + p.chi * p.B1 * y.zeta2 -
               y.zeta3 / (p.sigma * u_rel)) /
              (p.beta * u_rel);
    d.T = energy_bracket(y, sys) / effective_conductivity(y.T, p);
    return d;
}

Mat jacobian(const PlasmaState& y, const LayerSystem& sys) {
    const ModelParams& p = sys.params();
    const double s = p.frame_speed;
    const double u_rel = y.u - s;
    if (!(u_rel > 0.0)) throw DomainError("layer jacobian: wave-frame velocity must be positive");
    if (!(y.T > 0.0)) throw DomainError("layer jacobian: T must be positive");

    const EosSpec& eos = sys.eos();
    const double rho = p.M / u_rel;
    const double drho_du = -rho / u_rel;
    const double dpt_du = dpressure_drho(rho, y.T, eos) * drho_du;
    const double dpt_dT = dpressure_dT(rho, y.T, eos) + (4.0 / 3.0) * p.a_R * y.T * y.T * y.T;

    enum { U, V, W, BB2, BB3, Z2, Z3, TT };
    Mat J = Mat::Zero(8, 8);

    // dv/dx row
    J(V, V) = p.M / p.mu_visc;
    J(V, BB2) = -p.B1 / (p.mu_e * p.mu_visc);
    // dw/dx row
    J(W, W) = p.M / p.mu_visc;
    J(W, BB3) = -p.B1 / (p.mu_e * p.mu_visc);
    // du/dx row
    J(U, U) = (p.M + dpt_du) / p.eta;
    J(U, BB2) = y.B2 / (p.mu_e * p.eta);
    J(U, BB3) = y.B3 / (p.mu_e * p.eta);
    J(U, TT) = dpt_dT / p.eta;
    // dB2/dx, dB3/dx rows
    J(BB2, U) = -y.zeta2 / (u_rel * u_rel);
    J(BB2, Z2) = 1.0 / u_rel;
    J(BB3, U) = -y.zeta3 / (u_rel * u_rel);
    J(BB3, Z3) = 1.0 / u_rel;
    // dzeta2/dx row
    {
        const double N = p.E3 + (y.u * y.B2 - y.v * p.B1) - p.chi * p.B1 * y.zeta3 -
                         y.zeta2 / (p.sigma * u_rel);
        const double denom = p.beta * u_rel;
        const double dN_du = y.B2 + y.zeta2 / (p.sigma * u_rel * u_rel);
        J(Z2, U) = dN_du / denom - N * p.beta / (denom * denom);
        J(Z2, V) = -p.B1 / denom;
        J(Z2, BB2) = y.u / denom;
        J(Z2, Z2) = -1.0 / (p.sigma * u_rel * denom);
        J(Z2, Z3) = -p.chi * p.B1 / denom;
    }
    // dzeta3/dx row
    {
        const double N = -p.E2 + (y.u * y.B3 - y.w * p.B1) + p.chi * p.B1 * y.zeta2 -
                         y.zeta3 / (p.sigma * u_rel);
        const double denom = p.beta * u_rel;
        const double dN_du = y.B3 + y.zeta3 / (p.sigma * u_rel * u_rel);
        J(Z3, U) = dN_du / denom - N * p.beta / (denom * denom);
        J(Z3, W) = -p.B1 / denom;
        J(Z3, BB3) = y.u / denom;
        J(Z3, Z3) = -1.0 / (p.sigma * u_rel * denom);
        J(Z3, Z2) = p.chi * p.B1 / denom;
    }
    // dT/dx row
    {
        const double kappa_eff = effective_conductivity(y.T, p);
        const double Bperp2 = y.B2 * y.B2 + y.B3 * y.B3;
        const double dbr_du = -p.M * y.u - Bperp2 / (2.0 * p.mu_e) + p.P;
        const double dbr_dv = -p.M * y.v + p.B1 * y.B2 / p.mu_e + p.P2star;
        const double dbr_dw = -p.M * y.w + p.B1 * y.B3 / p.mu_e + p.P3star;
        const double dbr_dB2 =
            -(y.u + s) * y.B2 / p.mu_e + y.v * p.B1 / p.mu_e - p.E3 / p.mu_e;
        const double dbr_dB3 =
            -(y.u + s) * y.B3 / p.mu_e + y.w * p.B1 / p.mu_e + p.E2 / p.mu_e;
        const double dbr_dz2 = p.beta * y.zeta2 / (p.mu_e * p.mu_e);
        const double dbr_dz3 = p.beta * y.zeta3 / (p.mu_e * p.mu_e);
        const double dbr_dT =
            p.M * dinternal_energy_dT(y.T, eos) + 4.0 * p.a_R * y.T * y.T * y.T;
        const double br = energy_bracket(y, sys);
        const double dkeff_dT = 12.0 * p.D_R * p.a_R * y.T * y.T;

        J(TT, U) = dbr_du / kappa_eff;
        J(TT, V) = dbr_dv / kappa_eff;
        J(TT, W) = dbr_dw / kappa_eff;
        J(TT, BB2) = dbr_dB2 / kappa_eff;
        J(TT, BB3) = dbr_dB3 / kappa_eff;
        J(TT, Z2) = dbr_dz2 / kappa_eff;
        J(TT, Z3) = dbr_dz3 / kappa_eff;
        J(TT, TT) = (dbr_dT * kappa_eff - br * dkeff_dT) / (kappa_eff * kappa_eff);
    }
    return J;
}

Vec general_form_rhs(const Vec& state, const FluxFn& flux, const ViscFn& visc, double s,
                     const Vec& constants) {
    const Vec g = flux(state) - s * state + constants;
    const Mat B = visc(state);
    if (B.rows() != state.size() || B.cols() != state.size() || g.size() != state.size())
        throw ConfigError("general_form_rhs: dimension mismatch");
    Eigen::FullPivLU<Mat> lu(B);
    if (!lu.isInvertible()) {
        Eigen::JacobiSVD<Mat> svd(B);
        const double smin = svd.singularValues().minCoeff();
        const double smax = svd.singularValues().maxCoeff();
        const double cond = smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity();
        throw SingularViscosityError("general_form_rhs: singular viscosity matrix", cond);
    }
    return lu.solve(g);
}

Vec LayerOdeSystem::eval(const Vec& y) const {
    return rhs(PlasmaState::from_vector(y), sys_).to_vector();
}

Mat LayerOdeSystem::jacobian_at(const Vec& y) const {
    return jacobian(PlasmaState::from_vector(y), sys_);
}

bool LayerOdeSystem::admissible(const Vec& y) const {
    const PlasmaState st = PlasmaState::from_vector(y);
    return st.finite() && st.u - sys_.frame_speed() > 0.0 && st.T > 0.0;
}

std::unique_ptr<OdeSystemBase> LayerOdeSystem::rescaled(double t) const {
    return std::make_unique<LayerOdeSystem>(sys_.rescaled_dissipation(t));
}

std::unique_ptr<OdeSystemBase> LayerOdeSystem::clone() const {
    return std::make_unique<LayerOdeSystem>(sys_);
}

GeneralFormSystem::GeneralFormSystem(int n, FluxFn flux, ViscFn visc, double s, Vec constants)
    : n_(n), flux_(std::move(flux)), visc_(std::move(visc)), s_(s),
      constants_(std::move(constants)) {
    if (constants_.size() != n_) throw ConfigError("GeneralFormSystem: constants dimension mismatch");
}

Vec GeneralFormSystem::eval(const Vec& y) const {
    ViscFn scaled = [this](const Vec& x) { return Mat(visc_scale_ * visc_(x)); };
    return general_form_rhs(y, flux_, scaled, s_, constants_);
}

Mat GeneralFormSystem::jacobian_at(const Vec& y) const {
    Mat J(n_, n_);
    const Vec f0 = eval(y);
    for (int j = 0; j < n_; ++j) {
        const double h = 1e-7 * std::max(1.0, std::abs(y[j]));
        Vec yp = y, ym = y;
        yp[j] += h;
        ym[j] -= h;
        J.col(j) = (eval(yp) - eval(ym)) / (2.0 * h);
    }
    (void)f0;
    return J;
}

std::unique_ptr<OdeSystemBase> GeneralFormSystem::rescaled(double t) const {
    auto copy = std::make_unique<GeneralFormSystem>(*this);
    copy->visc_scale_ = visc_scale_ * t;
    return copy;
}

std::unique_ptr<OdeSystemBase> GeneralFormSystem::clone() const {
    return std::make_unique<GeneralFormSystem>(*this);
}

}  // namespace shocklayer
