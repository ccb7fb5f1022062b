#pragma once

#include "envsdr/numeric.hpp"
#include "envsdr/slicing.hpp"

namespace envsdr {

enum class KernelKind { SIR, SAVE, JOINT_SIR, PSIR, W_SIR, HYBRID };

// p x p PSD matrix living in the standardized (Z) coordinate system.
struct KernelMatrix {
    Matrix mat;
    KernelKind kind = KernelKind::SIR;

    int dim() const { return static_cast<int>(mat.rows()); }
};

struct StandardizedData {
    Matrix z;               // n x p, mean ~0, cov ~I
    Vector mu;              // column means
    Matrix sigma;           // sample covariance, divisor n-1
    Matrix sigma_inv_sqrt;  // whitening transform
};

// z_i = Sigma^(-1/2) (x_i - mu), covariance divisor n-1.
StandardizedData standardize(const Matrix& x);

// sum_h (n_h/n) m_h m_h^T with m_h the slice mean of z.
KernelMatrix sir_kernel(const Matrix& z, const SliceAssignment& slices);

// sum_h (n_h/n) (I - C_h)^2, C_h the within-slice covariance (divisor n_h-1).
KernelMatrix save_kernel(const Matrix& z, const SliceAssignment& slices);

// SIR on the cross-classified (y, w) slices.
KernelMatrix joint_sir_kernel(const Matrix& z, const SliceAssignment& y_slices,
                              const SliceAssignment& w_slices);

struct PsirResult {
    KernelMatrix kernel_star;  // pooled kernel in the within-slice standardized scale
    Matrix sigma0;             // sum_w (n_w/n) Sigma_w
    Matrix sigma0_inv_sqrt;
};

// Inner response slicing: values with at most inner_h distinct levels within a
// w-slice are sliced by level, otherwise equal-frequency into inner_h slices.
// For each w-slice: center at the slice mean, whiten by the pooled Sigma_0,
// take the SIR kernel of the inner slices, pool with weights n_w/n.
PsirResult psir_kernel(const Vector& y, const Matrix& z, const SliceAssignment& w_slices,
                       int inner_h);

// Conjugation Sigma_0^(-1/2) K* Sigma_0^(-1/2): moves the pooled kernel into
// the Z scale so its span lines up with the other kernels.
KernelMatrix partial_kernel_zscale(const PsirResult& psir);

// xi*k_w + (1-xi)*k_partial; with normalize, each input is scaled to unit
// trace first (zero-trace inputs stay zero).
KernelMatrix hybrid_kernel(const KernelMatrix& k_w, const KernelMatrix& k_partial, double xi,
                           bool normalize = false);

// How a response/auxiliary column is discretized for slicing.
enum class SliceMode { AUTO, CONTINUOUS, DISCRETE };

struct KernelConfig {
    KernelKind y_kernel = KernelKind::SIR;  // SIR or SAVE for the response kernel
    int h_y = 10;                           // response slices
    int h_w = 3;                            // slices per auxiliary column
    int h_inner = 3;                        // inner response slices inside each w-slice
    SliceMode y_mode = SliceMode::AUTO;
    SliceMode w_mode = SliceMode::AUTO;
    bool normalize_hybrid = false;
};

// Everything the estimators need, built once per dataset or resample.
struct KernelSet {
    StandardizedData std_data;
    SliceAssignment y_slices;
    SliceAssignment w_slices;   // cross-classified over auxiliary columns
    KernelMatrix k_y;           // response kernel (SIR or SAVE)
    KernelMatrix k_w;           // auxiliary SIR kernel
    KernelMatrix k_partial;     // Z-scale pooled within-slice kernel
    KernelMatrix k_joint;       // SIR on joint (y, w) slices
    PsirResult psir;
};

SliceAssignment slice_by_mode(const Vector& v, int h, SliceMode mode);

// Response sliced separately inside each w-slice (cutpoints local to the
// slice), labels offset so the result is a plain assignment over all rows.
// These are the same cells the pooled within-slice kernel averages over.
SliceAssignment joint_within_slices(const Vector& y, const SliceAssignment& w_slices,
                                    int inner_h);

// w has zero or more columns; with zero columns only k_y is meaningful and
// the w-dependent kernels are left empty. k_joint uses joint_within_slices
// cells rather than a product of global slicings, so thin response slices do
// not starve the joint means.
KernelSet build_kernels(const Vector& y, const Matrix& x, const Matrix& w,
                        const KernelConfig& cfg);

KernelMatrix hybrid_from_set(const KernelSet& ks, double xi, const KernelConfig& cfg);

}  // namespace envsdr
