#include "envsdr/kernels.hpp"

#include <cmath>
#include <set>
#include <string>
#include <vector>

namespace envsdr {

StandardizedData standardize(const Matrix& x) {
    const Eigen::Index n = x.rows();
    if (x.size() == 0) throw EmptyData("standardize: empty input");
    if (n < 2) throw InvalidInput("standardize: need at least 2 rows");
    if (!x.allFinite()) throw InvalidInput("standardize: non-finite values");

    StandardizedData out;
    out.mu = x.colwise().mean();
    Matrix centered = x.rowwise() - out.mu.transpose();
    out.sigma = symmetrize(centered.transpose() * centered / double(n - 1));
    out.sigma_inv_sqrt = inv_sqrt(out.sigma);
    out.z = centered * out.sigma_inv_sqrt;  // rows z_i = S^(-1/2)(x_i - mu), S^(-1/2) symmetric
    return out;
}

namespace {

std::vector<std::vector<int>> slice_members(const SliceAssignment& s) {
    std::vector<std::vector<int>> rows(static_cast<size_t>(s.H));
    for (size_t h = 0; h < rows.size(); ++h)
        rows[h].reserve(static_cast<size_t>(s.counts[h]));
    for (int i = 0; i < s.n(); ++i)
        rows[static_cast<size_t>(s.labels[static_cast<size_t>(i)] - 1)].push_back(i);
    return rows;
}

Matrix take_rows(const Matrix& m, const std::vector<int>& idx) {
    Matrix out(static_cast<Eigen::Index>(idx.size()), m.cols());
    for (size_t r = 0; r < idx.size(); ++r) out.row(static_cast<Eigen::Index>(r)) = m.row(idx[r]);
    return out;
}

Vector take(const Vector& v, const std::vector<int>& idx) {
    Vector out(static_cast<Eigen::Index>(idx.size()));
    for (size_t r = 0; r < idx.size(); ++r) out[static_cast<Eigen::Index>(r)] = v[idx[r]];
    return out;
}

}  // namespace

KernelMatrix sir_kernel(const Matrix& z, const SliceAssignment& slices) {
    if (slices.n() != z.rows()) throw InvalidInput("sir_kernel: slice/data length mismatch");
    const Eigen::Index p = z.cols();
    const double n = static_cast<double>(z.rows());
    Matrix k = Matrix::Zero(p, p);
    const auto members = slice_members(slices);
    for (const auto& rows : members) {
        Vector m = Vector::Zero(p);
        for (int i : rows) m += z.row(i).transpose();
        m /= static_cast<double>(rows.size());
        k.noalias() += (static_cast<double>(rows.size()) / n) * (m * m.transpose());
    }
    return KernelMatrix{symmetrize(k), KernelKind::SIR};
}

KernelMatrix save_kernel(const Matrix& z, const SliceAssignment& slices) {
    if (slices.n() != z.rows()) throw InvalidInput("save_kernel: slice/data length mismatch");
    require_min_slice_size(slices, 2, "save_kernel");
    const Eigen::Index p = z.cols();
    const double n = static_cast<double>(z.rows());
    const Matrix eye = Matrix::Identity(p, p);
    Matrix k = Matrix::Zero(p, p);
    for (const auto& rows : slice_members(slices)) {
        Matrix zh = take_rows(z, rows);
        Vector m = zh.colwise().mean();
        Matrix c = zh.rowwise() - m.transpose();
        Matrix cov = symmetrize(c.transpose() * c / double(rows.size() - 1));
        Matrix diff = eye - cov;
        k.noalias() += (static_cast<double>(rows.size()) / n) * (diff * diff);
    }
    return KernelMatrix{symmetrize(k), KernelKind::SAVE};
}

KernelMatrix joint_sir_kernel(const Matrix& z, const SliceAssignment& y_slices,
                              const SliceAssignment& w_slices) {
    KernelMatrix k = sir_kernel(z, cross_slices(y_slices, w_slices));
    k.kind = KernelKind::JOINT_SIR;
    return k;
}

PsirResult psir_kernel(const Vector& y, const Matrix& z, const SliceAssignment& w_slices,
                       int inner_h) {
    if (y.size() != z.rows() || w_slices.n() != z.rows())
        throw InvalidInput("psir_kernel: length mismatch");
    if (inner_h < 1) throw InvalidInput("psir_kernel: inner_h must be >= 1");
    require_min_slice_size(w_slices, 2, "psir_kernel");

    const Eigen::Index p = z.cols();
    const double n = static_cast<double>(z.rows());
    const auto members = slice_members(w_slices);

    // pooled within-slice covariance, each centered at its own slice mean
    Matrix sigma0 = Matrix::Zero(p, p);
    std::vector<Matrix> centered(members.size());
    for (size_t w = 0; w < members.size(); ++w) {
        Matrix zw = take_rows(z, members[w]);
        Vector mw = zw.colwise().mean();
        centered[w] = zw.rowwise() - mw.transpose();
        Matrix cov = centered[w].transpose() * centered[w] / double(members[w].size() - 1);
        sigma0 += (static_cast<double>(members[w].size()) / n) * cov;
    }
    sigma0 = symmetrize(sigma0);
    Matrix s0_inv_sqrt = inv_sqrt(sigma0);

    Matrix k = Matrix::Zero(p, p);
    for (size_t w = 0; w < members.size(); ++w) {
        Matrix zstar = centered[w] * s0_inv_sqrt;
        Vector yw = take(y, members[w]);
        SliceAssignment inner = slice_by_mode(yw, std::min<int>(inner_h, static_cast<int>(yw.size())),
                                              SliceMode::AUTO);
        KernelMatrix kw = sir_kernel(zstar, inner);
        k += (static_cast<double>(members[w].size()) / n) * kw.mat;
    }
    PsirResult out;
    out.kernel_star = KernelMatrix{symmetrize(k), KernelKind::PSIR};
    out.sigma0 = sigma0;
    out.sigma0_inv_sqrt = s0_inv_sqrt;
    return out;
}

KernelMatrix partial_kernel_zscale(const PsirResult& psir) {
    Matrix k = psir.sigma0_inv_sqrt * psir.kernel_star.mat * psir.sigma0_inv_sqrt;
    return KernelMatrix{symmetrize(k), KernelKind::PSIR};
}

KernelMatrix hybrid_kernel(const KernelMatrix& k_w, const KernelMatrix& k_partial, double xi,
                           bool normalize) {
    if (!(xi > 0.0 && xi < 1.0))
        throw InvalidInput("hybrid_kernel: xi must lie strictly inside (0,1)");
    if (k_w.mat.rows() != k_partial.mat.rows())
        throw InvalidInput("hybrid_kernel: dimension mismatch");
    Matrix a = k_w.mat;
    Matrix b = k_partial.mat;
    if (normalize) {
        const double ta = a.trace();
        const double tb = b.trace();
        if (ta > 0.0) a /= ta;
        if (tb > 0.0) b /= tb;
    }
    return KernelMatrix{symmetrize(xi * a + (1.0 - xi) * b), KernelKind::HYBRID};
}

SliceAssignment slice_by_mode(const Vector& v, int h, SliceMode mode) {
    if (mode == SliceMode::DISCRETE) return slice_discrete(v);
    if (mode == SliceMode::CONTINUOUS) return slice_continuous(v, h);
    std::set<double> distinct(v.data(), v.data() + v.size());
    if (static_cast<int>(distinct.size()) <= h) return slice_discrete(v);
    return slice_continuous(v, h);
}

SliceAssignment joint_within_slices(const Vector& y, const SliceAssignment& w_slices,
                                    int inner_h) {
    if (y.size() != w_slices.n()) throw InvalidInput("joint_within_slices: length mismatch");
    std::vector<int> raw(static_cast<size_t>(y.size()), 0);
    int offset = 0;
    const auto members = slice_members(w_slices);
    for (const auto& rows : members) {
        Vector yw = take(y, rows);
        SliceAssignment inner = slice_by_mode(
            yw, std::min<int>(inner_h, static_cast<int>(yw.size())), SliceMode::AUTO);
        for (size_t r = 0; r < rows.size(); ++r)
            raw[static_cast<size_t>(rows[r])] = offset + inner.labels[r];
        offset += inner.H;
    }
    SliceAssignment out;
    out.H = offset;
    out.labels = std::move(raw);
    out.counts.assign(static_cast<size_t>(out.H), 0);
    for (int lab : out.labels) out.counts[static_cast<size_t>(lab - 1)] += 1;
    return out;
}

KernelSet build_kernels(const Vector& y, const Matrix& x, const Matrix& w,
                        const KernelConfig& cfg) {
    if (y.size() != x.rows()) throw InvalidInput("build_kernels: y/x length mismatch");
    if (w.size() > 0 && w.rows() != x.rows())
        throw InvalidInput("build_kernels: w/x length mismatch");

    KernelSet ks;
    ks.std_data = standardize(x);
    ks.y_slices = slice_by_mode(y, cfg.h_y, cfg.y_mode);

    ks.k_y = cfg.y_kernel == KernelKind::SAVE ? save_kernel(ks.std_data.z, ks.y_slices)
                                              : sir_kernel(ks.std_data.z, ks.y_slices);

    if (w.cols() == 0) return ks;

    ks.w_slices = slice_by_mode(w.col(0), cfg.h_w, cfg.w_mode);
    for (Eigen::Index j = 1; j < w.cols(); ++j)
        ks.w_slices = cross_slices(ks.w_slices, slice_by_mode(w.col(j), cfg.h_w, cfg.w_mode));

    ks.k_w = sir_kernel(ks.std_data.z, ks.w_slices);
    ks.k_w.kind = KernelKind::W_SIR;
    ks.psir = psir_kernel(y, ks.std_data.z, ks.w_slices, cfg.h_inner);
    ks.k_partial = partial_kernel_zscale(ks.psir);
    ks.k_joint = sir_kernel(ks.std_data.z, joint_within_slices(y, ks.w_slices, cfg.h_inner));
    ks.k_joint.kind = KernelKind::JOINT_SIR;
    return ks;
}

KernelMatrix hybrid_from_set(const KernelSet& ks, double xi, const KernelConfig& cfg) {
    return hybrid_kernel(ks.k_w, ks.k_partial, xi, cfg.normalize_hybrid);
}

}  // namespace envsdr
