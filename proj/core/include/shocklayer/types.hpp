#ifndef SHOCKLAYER_TYPES_HPP
#define SHOCKLAYER_TYPES_HPP

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace shocklayer {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;

// State vector of the reduced shock-layer system.  u is the normal velocity,
// (v, w) the transverse velocities, (B2, B3) the transverse magnetic flux
// density, (zeta2, zeta3) the scaled current variables zeta_k = (u - s) dB_k/dx,
// and T the mean kinetic temperature.
struct PlasmaState {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;
    double B2 = 0.0;
    double B3 = 0.0;
    double zeta2 = 0.0;
    double zeta3 = 0.0;
    double T = 0.0;

    static constexpr int dim = 8;

    Vec to_vector() const {
        Vec y(dim);
        y << u, v, w, B2, B3, zeta2, zeta3, T;
        return y;
    }

    static PlasmaState from_vector(const Vec& y) {
        if (y.size() != dim) throw std::invalid_argument("PlasmaState: vector must have 8 components");
        return PlasmaState{y[0], y[1], y[2], y[3], y[4], y[5], y[6], y[7]};
    }

    bool finite() const {
        return std::isfinite(u) && std::isfinite(v) && std::isfinite(w) &&
               std::isfinite(B2) && std::isfinite(B3) && std::isfinite(zeta2) &&
               std::isfinite(zeta3) && std::isfinite(T);
    }
};

// Componentwise x-derivatives matching PlasmaState.
using StateDerivative = PlasmaState;

// Validation / precondition violations (bad inputs, bad configs).
class ConfigError : public std::invalid_argument {
  public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Domain violations on physical state (u <= 0, T <= 0, ...).
class DomainError : public std::domain_error {
  public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// Numerical failures (Newton divergence, integrator breakdown, singular matrices).
class NumericError : public std::runtime_error {
  public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

class SingularViscosityError : public NumericError {
  public:
    SingularViscosityError(const std::string& what, double condition_number)
        : NumericError(what), condition(condition_number) {}
    double condition;
};

// Rest-point search recovered nothing beyond (or not even) the upstream state.
class NoDownstreamError : public NumericError {
  public:
    explicit NoDownstreamError(const std::string& what) : NumericError(what) {}
};

}  // namespace shocklayer

#endif
