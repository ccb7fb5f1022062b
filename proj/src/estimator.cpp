#include "envsdr/estimator.hpp"

#include <string>

namespace envsdr {

namespace {

void attach_x_scale(EstimateResult& r, const Matrix* sigma_inv_sqrt) {
    r.basis_x = sigma_inv_sqrt ? back_transform(r.basis_z.columns, *sigma_inv_sqrt)
                               : r.basis_z.columns;
}

}  // namespace

EstimateResult direct_estimate(const KernelMatrix& k_yz, int d, const Matrix* sigma_inv_sqrt) {
    const int p = k_yz.dim();
    if (d < 1 || d > p)
        throw InvalidInput("direct_estimate: d=" + std::to_string(d) + " out of range");
    EigenSystem es = sym_eigen(k_yz.mat);
    EstimateResult r;
    r.basis_z = SubspaceBasis{es.vectors.leftCols(d), Scale::Z};
    r.eigenvalues_used = es.values.head(d);
    r.method = Method::DIRECT;
    attach_x_scale(r, sigma_inv_sqrt);
    return r;
}

SubspaceBasis envelope_basis(const KernelMatrix& k_env, int nu) {
    const int p = k_env.dim();
    if (nu < 1 || nu > p)
        throw InvalidInput("envelope_basis: nu=" + std::to_string(nu) + " out of range");
    EigenSystem es = sym_eigen(k_env.mat);
    return SubspaceBasis{es.vectors.leftCols(nu), Scale::Z};
}

EstimateResult two_stage_estimate(const KernelMatrix& k_yz, const SubspaceBasis& b_env, int d,
                                  const Matrix* sigma_inv_sqrt) {
    const int p = k_yz.dim();
    const int nu = b_env.rank();
    if (b_env.ambient_dim() != p) throw RankMismatch("two_stage_estimate: dimension mismatch");
    if (d < 1 || d > nu)
        throw InvalidInput("two_stage_estimate: d=" + std::to_string(d) +
                           " exceeds envelope rank " + std::to_string(nu));

    const Matrix& b = b_env.columns;
    Matrix proj = projection(b);
    EigenSystem es = sym_eigen(proj * k_yz.mat * proj);

    EstimateResult r;
    r.basis_z = SubspaceBasis{es.vectors.leftCols(d), Scale::Z};
    r.eigenvalues_used = es.values.head(d);
    r.method = Method::TWO_STAGE_HYBRID;
    r.nu = nu;

    // containment check: columns must lie in span(b_env)
    Matrix resid = r.basis_z.columns - b * (b.transpose() * r.basis_z.columns);
    bool contained = true;
    for (int j = 0; j < d; ++j) {
        if (resid.col(j).norm() >= 1e-11) {
            contained = false;
            break;
        }
    }
    if (!contained) {
        // nu x nu eigenproblem in envelope coordinates, containment exact
        EigenSystem small = sym_eigen(b.transpose() * k_yz.mat * b);
        Matrix cols = b * small.vectors.leftCols(d);
        r.basis_z = SubspaceBasis{orthonormalize(cols), Scale::Z};
        r.eigenvalues_used = small.values.head(d);
    }
    attach_x_scale(r, sigma_inv_sqrt);
    return r;
}

Matrix back_transform(const Matrix& basis_z, const Matrix& sigma_inv_sqrt) {
    if (sigma_inv_sqrt.cols() != basis_z.rows())
        throw InvalidInput("back_transform: dimension mismatch");
    return orthonormalize(sigma_inv_sqrt * basis_z);
}

}  // namespace envsdr
