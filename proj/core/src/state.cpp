#include "shocklayer/state.hpp"

namespace shocklayer {

void EosSpec::validate() const {
    if (kind == EosKind::user_tabulated)
        throw ConfigError("eos: user-tabulated data ingestion is not supported");
    if (!(R_gas > 0.0)) throw ConfigError("eos: R_gas must be positive");
    if (!(gamma_adiabatic > 1.0)) throw ConfigError("eos: gamma_adiabatic must exceed 1");
}

void ModelParams::validate() const {
    if (!(eta >= 0.0)) throw ConfigError("params: eta must be nonnegative");
    if (!(mu_visc >= 0.0)) throw ConfigError("params: mu_visc must be nonnegative");
    if (!(kappa >= 0.0)) throw ConfigError("params: kappa must be nonnegative");
    if (!(mu_e > 0.0)) throw ConfigError("params: mu_e must be positive");
    if (!(eps > 0.0)) throw ConfigError("params: eps must be positive");
    if (alpha12 < 0.0 && !(sigma > 0.0))
        throw ConfigError("params: sigma must be positive for negative alpha12");
    if (!(gamma_e < 0.0) || !(gamma_i > 0.0))
        throw ConfigError("params: expected gamma_e < 0 < gamma_i");
    if (!(a_R >= 0.0) || !(D_R >= 0.0))
        throw ConfigError("params: radiation constants must be nonnegative");
}

double density(const PlasmaState& state, const ModelParams& params) {
    const double u_rel = state.u - params.frame_speed;
    if (!(u_rel > 0.0)) throw DomainError("density: wave-frame velocity must be positive");
    return params.M / u_rel;
}

double gas_pressure(double rho, double T, const EosSpec& eos) {
    return rho * eos.R_gas * T;
}

double total_pressure(const PlasmaState& state, const ModelParams& params, const EosSpec& eos) {
    if (!(state.T > 0.0)) throw DomainError("total_pressure: T must be positive");
    const double rho = density(state, params);
    const double T = state.T;
    return gas_pressure(rho, T, eos) + (params.a_R / 3.0) * T * T * T * T;
}

double radiation_energy(double T, const ModelParams& params) {
    if (!(T > 0.0)) throw DomainError("radiation_energy: T must be positive");
    return params.a_R * T * T * T * T;
}

double internal_energy(double T, const EosSpec& eos) {
    return eos.R_gas * T / (eos.gamma_adiabatic - 1.0);
}

double effective_conductivity(double T, const ModelParams& params) {
    return params.kappa + 4.0 * params.D_R * params.a_R * T * T * T;
}

double dpressure_drho(double /*rho*/, double T, const EosSpec& eos) {
    return eos.R_gas * T;
}

double dpressure_dT(double rho, double /*T*/, const EosSpec& eos) {
    return rho * eos.R_gas;
}

double dinternal_energy_dT(double /*T*/, const EosSpec& eos) {
    return eos.R_gas / (eos.gamma_adiabatic - 1.0);
}

}  // namespace shocklayer
