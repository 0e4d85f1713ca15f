#ifndef SHOCKLAYER_TWOFLUID_HPP
#define SHOCKLAYER_TWOFLUID_HPP

// Two-species closure machinery: charge/mass partition under quasi-neutrality,
// diffusion velocities from the conduction current, electrical conductivity and
// Hall coefficient, the generalized Ohm's law residual, and the electron/ion
// temperature split along a computed profile.

#include <span>
#include <utility>
#include <vector>

#include "shocklayer/state.hpp"
#include "shocklayer/types.hpp"

namespace shocklayer {

enum class CollisionModel {
    constant_frequency,       // f is a fixed collision frequency
    proportional_to_density,  // f = c1 * nu, making sigma density-independent
};

// Particle data for the two species.  Singly ionized: e_i = -e_e = e.
struct SpeciesSpec {
    double m_e = 1.0 / 1836.0;
    double m_i = 1.0;
    double e_charge = 1.0;
    CollisionModel collision = CollisionModel::constant_frequency;
    double f1 = 1.0;  // electron collision frequency (constant model)
    double c1 = 1.0;  // f1 = c1 * nu (proportional model)

    void validate() const;
    double gamma_e() const { return -e_charge / m_e; }
    double gamma_i() const { return e_charge / m_i; }
    double collision_frequency(double nu) const;
};

// Per-species quantities reconstructed from the mean variables.
struct SpeciesView {
    double rho_e = 0.0, rho_i = 0.0;   // species mass densities
    Vec3 w_e = Vec3::Zero();           // diffusion velocities
    Vec3 w_i = Vec3::Zero();
    double rho_ee = 0.0, rho_ei = 0.0; // species charge densities (sum to zero)
    double T_e = 0.0, T_i = 0.0;       // species temperatures
};

// rho_1 = gamma_2/(gamma_2 - gamma_1) rho, rho_2 = gamma_1/(gamma_1 - gamma_2) rho
std::pair<double, double> partition_density(double rho, std::pair<double, double> gammas);

// w_1 = -i/(gamma_2 rho), w_2 = -i/(gamma_1 rho)
std::pair<Vec3, Vec3> diffusion_velocities(const Vec3& current, double rho,
                                           std::pair<double, double> gammas);

struct TransportCoefficients {
    double sigma = 0.0;    // electrical conductivity
    double hall = 0.0;     // generalized-Ohm Hall coefficient (the i x B term)
    double beta = 0.0;     // current-inertia coefficient -1/(gamma_e gamma_i M)
    double alpha12 = 0.0;  // friction coefficient, negative
};

// Conductivity, Hall coefficient, friction, and the current-inertia constant
// from the species data at number density nu and mass flux M.
TransportCoefficients transport_coefficients(const SpeciesSpec& spec, double rho, double nu,
                                             double mass_flux);

// Layer-equation constants sigma, chi, beta derived from the species data:
// sigma as in transport_coefficients, chi = (gamma_e+gamma_i)/(gamma_e gamma_i M),
// beta = -1/(gamma_e gamma_i M).
struct DerivedLayerCoefficients {
    double sigma = 0.0;
    double chi = 0.0;
    double beta = 0.0;
};
DerivedLayerCoefficients derived_layer_coefficients(const SpeciesSpec& spec, double rho_upstream,
                                                    double mass_flux);

// Residual of i = sigma (E + u x B) - chi (i x B) with the current assembled
// from (zeta2, zeta3); an ideal-limit (beta -> 0) diagnostic.
Vec3 ohm_residual(const PlasmaState& state, const ModelParams& params);

// Both sides of i . (E + u x B) = i^2 / sigma for a current obeying the
// Hall-free Ohm's law.
std::pair<double, double> joule_identity_check(const Vec3& current, const Vec3& E, const Vec3& u,
                                               const Vec3& B, double sigma);

struct TemperatureSplit {
    std::vector<double> T_e;
    std::vector<double> T_i;
};

// Integrates u dT_e/dx = (2 m_e f / m_i)(T_i - T_e) along a profile with
// T_i eliminated via T = (T_e + T_i)/2, starting from upstream equilibrium
// T_e = T.  x must be strictly increasing; u > 0 on the grid.
TemperatureSplit temperature_split(std::span<const double> x, std::span<const double> u,
                                   std::span<const double> T, const SpeciesSpec& spec);

// Same with a per-sample collision frequency (for density-dependent collisions).
TemperatureSplit temperature_split(std::span<const double> x, std::span<const double> u,
                                   std::span<const double> T, std::span<const double> f,
                                   double m_e, double m_i);

// Per-species reconstruction at one state: densities, diffusion velocities,
// charge densities.  Temperatures are profile-level (temperature_split).
SpeciesView species_view(const PlasmaState& state, const ModelParams& params,
                         const SpeciesSpec& spec);

}  // namespace shocklayer

#endif
