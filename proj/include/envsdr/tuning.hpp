#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "envsdr/dimension.hpp"
#include "envsdr/estimator.hpp"

namespace envsdr {

struct QdaClass {
    int label = 0;
    double prior = 0.0;
    Vector mean;
    Matrix cov;      // divisor n_c - 1, plus ridge when enabled
    Matrix inv;
    double log_det = 0.0;
};

struct QdaModel {
    std::vector<QdaClass> classes;
    int dim = 0;

    int classify(const Vector& x) const;  // label with the largest log-posterior
};

// Class-conditional Gaussians with empirical priors. With auto_ridge (the
// default), a class covariance whose smallest eigenvalue falls below
// 1e-8 * largest gets 1e-6 * trace/k added to its diagonal.
QdaModel qda_fit(const Matrix& features, const std::vector<int>& labels, bool auto_ridge = true);

// Fraction of points classified correctly when each is held out in turn.
double qda_loo_accuracy(const Matrix& features, const std::vector<int>& labels,
                        bool auto_ridge = true);

enum class ScoreKind { BOOTSTRAP_VARIABILITY, LOO_CA };

struct TuningCandidate {
    int nu = 0;
    double xi = 0.0;
    double score = 0.0;
};

struct TuningReport {
    std::vector<TuningCandidate> candidates;
    int nu = 0;
    double xi = 0.0;
    ScoreKind score_kind = ScoreKind::LOO_CA;
};

// Candidate grid = nu_range x xi_grid. For each candidate: two-stage basis at
// (nu, xi), leave-one-out QDA accuracy of the leading loo_components scores
// (0 means the selected structural dimension d). Chosen = argmax; ties go to
// the smaller nu, then the smaller xi.
TuningReport tune_by_loo(const Vector& y, const Matrix& x, const Matrix& w,
                         const KernelConfig& cfg, const std::vector<int>& nu_range,
                         const std::vector<double>& xi_grid, int loo_components = 0,
                         double c_n = -1.0);

// For each candidate: full-data estimate at (nu, xi, d), then m with-replacement
// resamples; the score is 1 - mean trace correlation between the resampled and
// the full-data estimate. Chosen = argmin. A resample whose kernels cannot be
// built (collapsed slice, singular covariance) is redrawn up to 10 times.
TuningReport tune_by_bootstrap(const Vector& y, const Matrix& x, const Matrix& w,
                               const KernelConfig& cfg,
                               const std::vector<std::pair<int, double>>& candidates, int d,
                               int m, std::uint64_t seed, bool stratify_by_y = false);

// Convenience overload over a product grid.
TuningReport tune_by_bootstrap(const Vector& y, const Matrix& x, const Matrix& w,
                               const KernelConfig& cfg, const std::vector<int>& nu_range,
                               const std::vector<double>& xi_grid, int d, int m,
                               std::uint64_t seed, bool stratify_by_y = false);

// LOO accuracy of QDA on (w columns, leading two within-slice kernel
// components): the reference rule that consumes w directly.
double benchmark_li2006(const Vector& y, const Matrix& x, const Matrix& w,
                        const KernelConfig& cfg);

}  // namespace envsdr
