#ifndef SHOCKLAYER_STATE_HPP
#define SHOCKLAYER_STATE_HPP

// Model constants and thermodynamic/transport closures: equation of state,
// radiation pressure/energy in the diffusion approximation, and the effective
// heat conductivity with the radiative flux folded into Fourier form.

#include "shocklayer/types.hpp"

namespace shocklayer {

enum class EosKind { ideal_gas, user_tabulated };

// Equation-of-state closure p = p(rho, T).  Only the calorically perfect
// ideal gas is shipped; the struct is the plug-in point for alternatives.
struct EosSpec {
    EosKind kind = EosKind::ideal_gas;
    double R_gas = 1.0;            // specific gas constant
    double gamma_adiabatic = 5.0 / 3.0;

    void validate() const;
};

// All constants of the reduced system.  The flux constants (M, P, P2star,
// P3star, C) and the field constants (E2, E3) are normally filled in from an
// upstream state by jump::constants_from_upstream.
struct ModelParams {
    // flux constants
    double M = 1.0;        // mass flux rho*(u - frame_speed)
    double P = 0.0;        // combined normal momentum constant
    double P2star = 0.0;   // transverse momentum constants
    double P3star = 0.0;
    double C = 0.0;        // energy constant

    // field constants
    double B1 = 0.0;       // normal magnetic component, constant
    double E1 = 0.0;       // electric field components, constant
    double E2 = 0.0;
    double E3 = 0.0;
    double mu_e = 1.0;     // magnetic permeability
    double eps = 1.0;      // inductive capacity

    // dissipation coefficients
    double eta = 1.0;      // longitudinal viscosity (4/3 mu + bulk)
    double mu_visc = 1.0;  // shear viscosity
    double kappa = 1.0;    // heat conductivity
    double beta = 1.0;     // current-inertia coefficient -1/(gamma_e gamma_i M)
    double sigma = 1.0;    // electrical conductivity
    double chi = 0.0;      // Hall coefficient of the layer equations

    // species charge-to-mass ratios e_alpha/m_alpha
    double gamma_e = -1.0;
    double gamma_i = 1.0;
    double alpha12 = -1.0;  // friction coefficient, negative for physical plasmas

    // radiation and potential
    double a_R = 0.0;      // radiation constant
    double D_R = 0.0;      // radiation diffusion coefficient
    double phi = 0.0;      // potential energy per unit mass

    // wave speed in the working frame; 0 in the shock frame
    double frame_speed = 0.0;

    void validate() const;
};

// mean density rho = M / (u - s)
double density(const PlasmaState& state, const ModelParams& params);

// gasdynamic pressure p(rho, T)
double gas_pressure(double rho, double T, const EosSpec& eos);

// total pressure p_t = p(rho, T) + (a_R/3) T^4
double total_pressure(const PlasmaState& state, const ModelParams& params, const EosSpec& eos);

// radiation energy density a_R T^4
double radiation_energy(double T, const ModelParams& params);

// internal energy per unit mass
double internal_energy(double T, const EosSpec& eos);

// kappa_eff(T) = kappa + 4 D_R a_R T^3 (radiative flux in Fourier form)
double effective_conductivity(double T, const ModelParams& params);

// partial derivatives used by the analytic Jacobian
double dpressure_drho(double rho, double T, const EosSpec& eos);
double dpressure_dT(double rho, double T, const EosSpec& eos);
double dinternal_energy_dT(double T, const EosSpec& eos);

}  // namespace shocklayer

#endif
