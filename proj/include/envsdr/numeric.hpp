#pragma once

#include <Eigen/Dense>

#include "envsdr/errors.hpp"

namespace envsdr {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

enum class Scale { Z, X };

// Eigenvalues sorted descending; column j of vectors pairs with values[j].
// Sign convention: largest-magnitude entry of each column is positive.
struct EigenSystem {
    Vector values;
    Matrix vectors;
};

// Column-orthonormal p x k matrix tagged with its coordinate scale.
struct SubspaceBasis {
    Matrix columns;
    Scale scale = Scale::Z;

    int ambient_dim() const { return static_cast<int>(columns.rows()); }
    int rank() const { return static_cast<int>(columns.cols()); }
};

// (m + m^T)/2, the canonical symmetric representative.
Matrix symmetrize(const Matrix& m);

// Full symmetric eigendecomposition, descending, sign-fixed, with a
// deterministic lexicographic order among exactly tied eigenvalues.
EigenSystem sym_eigen(const Matrix& m);

// V diag((clamp(lambda) + ridge)^(-1/2)) V^T. Eigenvalues below
// 1e-10*lambda_max are clamped up to that floor (pseudo-inverse behavior on
// numerically singular covariances). Anything below -1e-8*lambda_max is a
// genuine violation and throws NotPSD.
Matrix inv_sqrt(const Matrix& m, double ridge = 0.0);

// B B^T for a column-orthonormal basis.
Matrix projection(const Matrix& basis);

// Gram-Schmidt via Householder QR, keeping column count; sign-fixed.
Matrix orthonormalize(const Matrix& m);

// sqrt(tr(P1 P2)/d) in [0,1] for two column-orthonormal bases of equal rank
// and ambient dimension. 1 iff equal spans, 0 iff orthogonal.
double trace_correlation(const Matrix& b1, const Matrix& b2);
double trace_correlation(const SubspaceBasis& b1, const SubspaceBasis& b2);

}  // namespace envsdr
