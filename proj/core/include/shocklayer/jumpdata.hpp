#ifndef SHOCKLAYER_JUMPDATA_HPP
#define SHOCKLAYER_JUMPDATA_HPP

#include <complex>
#include <vector>

#include "shocklayer/types.hpp"

namespace shocklayer {

// First integrals of the layer system plus the field constants fixed by the
// rest-point form of the zeta equations.
struct FluxConstants {
    double M = 0.0;
    double P = 0.0;
    double P2star = 0.0;
    double P3star = 0.0;
    double C = 0.0;
    double E2 = 0.0;
    double E3 = 0.0;
    double B1 = 0.0;
};

// A root of the algebraic rest-point system together with the eigenvalue
// classification of the layer Jacobian there.
struct RestPoint {
    PlasmaState state;                        // zeta2 = zeta3 = 0
    double residual_norm = 0.0;               // max-norm of the rest-point residual
    int n_unstable = 0;
    int n_stable = 0;
    int n_center = 0;
    std::vector<std::complex<double>> eigenvalues;
    Mat jacobian;                             // layer Jacobian at the point
    Eigen::MatrixXcd eigenvectors;
};

struct JumpPair {
    RestPoint upstream;
    RestPoint downstream;
    FluxConstants constants;
};

}  // namespace shocklayer

#endif
