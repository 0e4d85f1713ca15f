#ifndef SHOCKLAYER_LAYER_HPP
#define SHOCKLAYER_LAYER_HPP

// The shock-layer ODE system: right-hand side and analytic Jacobian of the
// 8-dimensional first-order system in (u, v, w, B2, B3, zeta2, zeta3, T),
// plus the general conservation-form reduction B(y) dy/dx = f(y) - s y + C.
//
// With u_rel = u - s, rho = M/u_rel, p_t = p(rho,T) + p_R(T):
//   mu  dv/dx    = M v - B1 B2/mu_e - P2*
//   mu  dw/dx    = M w - B1 B3/mu_e - P3*
//   eta du/dx    = (B2^2 + B3^2)/(2 mu_e) + M u - P + p_t
//   u_rel dB2/dx = zeta2
//   u_rel dB3/dx = zeta3
//   beta u_rel dzeta2/dx =  E3 + (u B2 - v B1) - chi B1 zeta3 - zeta2/(sigma u_rel)
//   beta u_rel dzeta3/dx = -E2 + (u B3 - w B1) + chi B1 zeta2 - zeta3/(sigma u_rel)
//   kappa_eff(T) dT/dx   = energy bracket (first-integral elimination, see rhs())

#include <functional>
#include <memory>

#include "shocklayer/jumpdata.hpp"
#include "shocklayer/state.hpp"
#include "shocklayer/types.hpp"

namespace shocklayer {

// Immutable bundle of parameters, EOS and flux constants; all dissipation
// coefficients multiplying derivatives must be strictly positive (the system
// is solved in explicit form dy/dx = B^-1 G).
class LayerSystem {
  public:
    LayerSystem(ModelParams params, EosSpec eos);
    LayerSystem(ModelParams params, EosSpec eos, const FluxConstants& constants);

    const ModelParams& params() const { return params_; }
    const EosSpec& eos() const { return eos_; }
    double frame_speed() const { return params_.frame_speed; }

    LayerSystem rescaled_dissipation(double t) const;

  private:
    ModelParams params_;
    EosSpec eos_;
};

// Right-hand side of the layer system.  Throws DomainError when u_rel <= 0 or
// T <= 0 (integration must stop, not extrapolate).
StateDerivative rhs(const PlasmaState& state, const LayerSystem& sys);

// Analytic 8x8 Jacobian d(rhs)/d(state) in the PlasmaState component order.
Mat jacobian(const PlasmaState& state, const LayerSystem& sys);

// The energy bracket (numerator of the dT/dx row); rest points are where it
// and all other rows vanish.
double energy_bracket(const PlasmaState& state, const LayerSystem& sys);

// General conservation-form reduction: returns visc(y)^-1 (flux(y) - s y + C).
// Throws SingularViscosityError (with a condition estimate) when visc(y) is
// numerically singular.
using FluxFn = std::function<Vec(const Vec&)>;
using ViscFn = std::function<Mat(const Vec&)>;
Vec general_form_rhs(const Vec& state, const FluxFn& flux, const ViscFn& visc, double s,
                     const Vec& constants);

// Abstract autonomous ODE system used by the profile machinery.
class OdeSystemBase {
  public:
    virtual ~OdeSystemBase() = default;
    virtual int dim() const = 0;
    virtual Vec eval(const Vec& y) const = 0;
    virtual Mat jacobian_at(const Vec& y) const = 0;
    // false once the state leaves the physically admissible cone
    virtual bool admissible(const Vec& y) const { (void)y; return true; }
    // copy with all dissipation coefficients scaled by t
    virtual std::unique_ptr<OdeSystemBase> rescaled(double t) const = 0;
    virtual std::unique_ptr<OdeSystemBase> clone() const = 0;
};

// Layer system adapter for the profile machinery.
class LayerOdeSystem final : public OdeSystemBase {
  public:
    explicit LayerOdeSystem(LayerSystem sys) : sys_(std::move(sys)) {}
    int dim() const override { return PlasmaState::dim; }
    Vec eval(const Vec& y) const override;
    Mat jacobian_at(const Vec& y) const override;
    bool admissible(const Vec& y) const override;
    std::unique_ptr<OdeSystemBase> rescaled(double t) const override;
    std::unique_ptr<OdeSystemBase> clone() const override;
    const LayerSystem& layer() const { return sys_; }

  private:
    LayerSystem sys_;
};

// General-form adapter (flux/viscosity handles), e.g. the scalar Burgers
// embedding used by the closed-form oracles.
class GeneralFormSystem final : public OdeSystemBase {
  public:
    GeneralFormSystem(int n, FluxFn flux, ViscFn visc, double s, Vec constants);
    int dim() const override { return n_; }
    Vec eval(const Vec& y) const override;
    Mat jacobian_at(const Vec& y) const override;  // central differences
    std::unique_ptr<OdeSystemBase> rescaled(double t) const override;
    std::unique_ptr<OdeSystemBase> clone() const override;

  private:
    int n_;
    FluxFn flux_;
    ViscFn visc_;
    double s_;
    Vec constants_;
    double visc_scale_ = 1.0;
};

}  // namespace shocklayer

#endif
