#include "envsdr/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace envsdr {

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

namespace {

void fix_sign(Matrix& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index imax = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            double a = std::abs(vectors(i, j));
            if (a > best) {
                best = a;
                imax = i;
            }
        }
        if (vectors(imax, j) < 0.0) vectors.col(j) = -vectors.col(j);
    }
}

bool lex_less(const Matrix& v, Eigen::Index a, Eigen::Index b) {
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
        if (v(i, a) != v(i, b)) return v(i, a) < v(i, b);
    }
    return false;
}

}  // namespace

EigenSystem sym_eigen(const Matrix& m) {
    if (!m.allFinite()) throw InvalidInput("sym_eigen: non-finite entries");
    if (m.rows() != m.cols()) throw InvalidInput("sym_eigen: matrix not square");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
    if (solver.info() != Eigen::Success) throw NotPSD("sym_eigen: eigensolver failed");

    const Eigen::Index p = m.rows();
    EigenSystem out;
    out.values.resize(p);
    out.vectors.resize(p, p);
    // solver returns ascending order
    for (Eigen::Index j = 0; j < p; ++j) {
        out.values[j] = solver.eigenvalues()[p - 1 - j];
        out.vectors.col(j) = solver.eigenvectors().col(p - 1 - j);
    }
    fix_sign(out.vectors);

    // deterministic order inside runs of exactly equal eigenvalues
    Eigen::Index start = 0;
    while (start < p) {
        Eigen::Index stop = start + 1;
        while (stop < p && out.values[stop] == out.values[start]) ++stop;
        if (stop - start > 1) {
            std::vector<Eigen::Index> idx(static_cast<size_t>(stop - start));
            std::iota(idx.begin(), idx.end(), start);
            std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
                return lex_less(out.vectors, a, b);
            });
            Matrix block(p, stop - start);
            for (Eigen::Index j = 0; j < stop - start; ++j)
                block.col(j) = out.vectors.col(idx[static_cast<size_t>(j)]);
            out.vectors.middleCols(start, stop - start) = block;
        }
        start = stop;
    }
    return out;
}

Matrix inv_sqrt(const Matrix& m, double ridge) {
    EigenSystem es = sym_eigen(m);
    const double lmax = es.values.size() ? es.values[0] : 0.0;
    if (lmax < 0.0) throw NotPSD("inv_sqrt: all eigenvalues negative");
    const double floor_val = 1e-10 * lmax;
    Vector d(es.values.size());
    for (Eigen::Index j = 0; j < es.values.size(); ++j) {
        double lam = es.values[j];
        if (lam < -1e-8 * lmax) throw NotPSD("inv_sqrt: negative eigenvalue beyond tolerance");
        lam = std::max(lam, floor_val) + ridge;
        if (lam <= 0.0) throw NotPSD("inv_sqrt: zero spectrum and no ridge");
        d[j] = 1.0 / std::sqrt(lam);
    }
    return es.vectors * d.asDiagonal() * es.vectors.transpose();
}

Matrix projection(const Matrix& basis) { return basis * basis.transpose(); }

Matrix orthonormalize(const Matrix& m) {
    Eigen::HouseholderQR<Matrix> qr(m);
    Matrix q = qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
    fix_sign(q);
    return q;
}

double trace_correlation(const Matrix& b1, const Matrix& b2) {
    if (b1.rows() != b2.rows())
        throw RankMismatch("trace_correlation: ambient dimensions differ");
    if (b1.cols() != b2.cols())
        throw RankMismatch("trace_correlation: subspace ranks differ");
    if (b1.cols() == 0) throw InvalidInput("trace_correlation: empty basis");
    const double d = static_cast<double>(b1.cols());
    const double t = (b1.transpose() * b2).squaredNorm();  // tr(P1 P2) for orthonormal bases
    return std::min(1.0, std::sqrt(std::max(0.0, t / d)));
}

double trace_correlation(const SubspaceBasis& b1, const SubspaceBasis& b2) {
    return trace_correlation(b1.columns, b2.columns);
}

}  // namespace envsdr
