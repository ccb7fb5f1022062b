#pragma once

#include <limits>

#include "envsdr/kernels.hpp"

namespace envsdr {

enum class Method { DIRECT, TWO_STAGE_NAIVE, TWO_STAGE_HYBRID };

struct EstimateResult {
    SubspaceBasis basis_z;    // p x d, orthonormal
    Matrix basis_x;           // p x d, orthonormal after back-transform
    Vector eigenvalues_used;  // top d, descending
    Method method = Method::DIRECT;
    int nu = -1;
    double xi = std::numeric_limits<double>::quiet_NaN();
};

// Leading d eigenvectors of the response kernel. When sigma_inv_sqrt is
// supplied the X-scale basis is filled in, otherwise basis_x == basis_z.
EstimateResult direct_estimate(const KernelMatrix& k_yz, int d,
                               const Matrix* sigma_inv_sqrt = nullptr);

// Leading nu eigenvectors of the envelope kernel.
SubspaceBasis envelope_basis(const KernelMatrix& k_env, int nu);

// Leading d eigenvectors of P K P with P the projector onto span(b_env).
// Columns are guaranteed to lie inside the envelope: if rounding in the
// p x p eigenproblem leaves a residual above 1e-11, the nu x nu formulation
// in envelope coordinates is used instead (exact containment).
EstimateResult two_stage_estimate(const KernelMatrix& k_yz, const SubspaceBasis& b_env, int d,
                                  const Matrix* sigma_inv_sqrt = nullptr);

// Orthonormalized Sigma^(-1/2) * basis columns, tagged X scale.
Matrix back_transform(const Matrix& basis_z, const Matrix& sigma_inv_sqrt);

}  // namespace envsdr
