#include "envsdr/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "envsdr/rng.hpp"

namespace envsdr {

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    return splitmix64(state);
}

}  // namespace

int QdaModel::classify(const Vector& x) const {
    double best = -std::numeric_limits<double>::infinity();
    int best_label = classes.front().label;
    for (const auto& c : classes) {
        Vector diff = x - c.mean;
        double score = std::log(c.prior) - 0.5 * c.log_det -
                       0.5 * diff.dot(c.inv * diff) - 0.5 * dim * kLog2Pi;
        if (score > best) {
            best = score;
            best_label = c.label;
        }
    }
    return best_label;
}

QdaModel qda_fit(const Matrix& features, const std::vector<int>& labels, bool auto_ridge) {
    const Eigen::Index n = features.rows();
    const Eigen::Index k = features.cols();
    if (static_cast<Eigen::Index>(labels.size()) != n)
        throw InvalidInput("qda_fit: label/feature length mismatch");
    if (n < 2) throw InvalidInput("qda_fit: need at least 2 rows");

    std::map<int, std::vector<int>> groups;
    for (Eigen::Index i = 0; i < n; ++i) groups[labels[static_cast<size_t>(i)]].push_back(static_cast<int>(i));
    if (groups.size() < 2) throw InvalidInput("qda_fit: need at least 2 classes");

    QdaModel model;
    model.dim = static_cast<int>(k);
    for (const auto& [label, rows] : groups) {
        const Eigen::Index nc = static_cast<Eigen::Index>(rows.size());
        if (nc < 2 && !auto_ridge)
            throw InvalidInput("qda_fit: class " + std::to_string(label) +
                               " has a single member and ridge is off");
        QdaClass c;
        c.label = label;
        c.prior = static_cast<double>(nc) / static_cast<double>(n);
        Matrix sub(nc, k);
        for (Eigen::Index r = 0; r < nc; ++r) sub.row(r) = features.row(rows[static_cast<size_t>(r)]);
        c.mean = sub.colwise().mean();
        Matrix centered = sub.rowwise() - c.mean.transpose();
        c.cov = symmetrize(centered.transpose() * centered /
                           static_cast<double>(std::max<Eigen::Index>(nc - 1, 1)));

        if (auto_ridge) {
            EigenSystem es = sym_eigen(c.cov);
            const double lmax = es.values[0];
            const double lmin = es.values[es.values.size() - 1];
            if (lmin < 1e-8 * lmax || lmax <= 0.0) {
                const double tr = c.cov.trace();
                const double ridge = 1e-6 * (tr > 0.0 ? tr / static_cast<double>(k) : 1.0);
                c.cov += ridge * Matrix::Identity(k, k);
            }
        }
        Eigen::LLT<Matrix> llt(c.cov);
        if (llt.info() != Eigen::Success)
            throw NotPSD("qda_fit: class covariance not positive definite (enable ridge)");
        c.inv = llt.solve(Matrix::Identity(k, k));
        c.log_det = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) c.log_det += 2.0 * std::log(llt.matrixL()(j, j));
        model.classes.push_back(std::move(c));
    }
    return model;
}

double qda_loo_accuracy(const Matrix& features, const std::vector<int>& labels,
                        bool auto_ridge) {
    const Eigen::Index n = features.rows();
    if (n < 4) throw InvalidInput("qda_loo_accuracy: need at least 4 rows");
    Matrix rest(n - 1, features.cols());
    std::vector<int> rest_labels(static_cast<size_t>(n - 1));
    int correct = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index r = 0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (j == i) continue;
            rest.row(r) = features.row(j);
            rest_labels[static_cast<size_t>(r)] = labels[static_cast<size_t>(j)];
            ++r;
        }
        QdaModel model = qda_fit(rest, rest_labels, auto_ridge);
        if (model.classify(features.row(i).transpose()) == labels[static_cast<size_t>(i)]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(n);
}

TuningReport tune_by_loo(const Vector& y, const Matrix& x, const Matrix& w,
                         const KernelConfig& cfg, const std::vector<int>& nu_range,
                         const std::vector<double>& xi_grid, int loo_components, double c_n) {
    if (nu_range.empty() || xi_grid.empty()) throw InvalidInput("tune_by_loo: empty grid");
    KernelSet ks = build_kernels(y, x, w, cfg);
    const int n = static_cast<int>(y.size());
    const double cn = c_n > 0.0 ? c_n : std::pow(static_cast<double>(n), 0.25);

    int d = loo_components;
    if (d <= 0) {
        DimSelection sel = select_d(
            ks.k_y, [&](double xi) { return hybrid_from_set(ks, xi, cfg); }, xi_grid, n, cn);
        d = sel.d;
    }

    std::vector<int> labels(static_cast<size_t>(n));
    {
        SliceAssignment ys = slice_discrete(y);
        labels = ys.labels;
    }

    TuningReport report;
    report.score_kind = ScoreKind::LOO_CA;
    double best = -1.0;
    std::vector<int> nus = nu_range;
    std::sort(nus.begin(), nus.end());
    for (int nu : nus) {
        if (nu < d || nu > ks.k_y.dim()) continue;
        for (double xi : xi_grid) {
            KernelMatrix ke = hybrid_from_set(ks, xi, cfg);
            SubspaceBasis benv = envelope_basis(ke, nu);
            EstimateResult est = two_stage_estimate(ks.k_y, benv, d);
            Matrix scores = ks.std_data.z * est.basis_z.columns;
            const double ca = qda_loo_accuracy(scores, labels);
            report.candidates.push_back({nu, xi, ca});
            if (ca > best) {  // ties keep the earlier (smaller nu, smaller xi) candidate
                best = ca;
                report.nu = nu;
                report.xi = xi;
            }
        }
    }
    if (report.candidates.empty())
        throw InvalidInput("tune_by_loo: no feasible candidate (every nu below d=" +
                           std::to_string(d) + ")");
    return report;
}

namespace {

std::vector<int> draw_indices(Rng& rng, int n, bool stratify, const SliceAssignment& strata) {
    std::vector<int> idx(static_cast<size_t>(n));
    if (!stratify) {
        for (int i = 0; i < n; ++i)
            idx[static_cast<size_t>(i)] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        return idx;
    }
    std::vector<std::vector<int>> groups(static_cast<size_t>(strata.H));
    for (int i = 0; i < n; ++i)
        groups[static_cast<size_t>(strata.labels[static_cast<size_t>(i)] - 1)].push_back(i);
    size_t pos = 0;
    for (const auto& g : groups) {
        for (size_t r = 0; r < g.size(); ++r)
            idx[pos++] = g[rng.below(g.size())];
    }
    return idx;
}

}  // namespace

TuningReport tune_by_bootstrap(const Vector& y, const Matrix& x, const Matrix& w,
                               const KernelConfig& cfg,
                               const std::vector<std::pair<int, double>>& candidates, int d,
                               int m, std::uint64_t seed, bool stratify_by_y) {
    if (m < 2) throw InvalidInput("tune_by_bootstrap: need m >= 2 resamples");
    if (candidates.empty()) throw InvalidInput("tune_by_bootstrap: empty candidate list");
    const int n = static_cast<int>(y.size());

    KernelSet full = build_kernels(y, x, w, cfg);
    std::vector<Matrix> full_bases;
    full_bases.reserve(candidates.size());
    for (const auto& [nu, xi] : candidates) {
        SubspaceBasis benv = envelope_basis(hybrid_from_set(full, xi, cfg), nu);
        full_bases.push_back(two_stage_estimate(full.k_y, benv, d).basis_z.columns);
    }

    SliceAssignment strata;
    if (stratify_by_y) strata = full.y_slices;

    std::vector<double> loss(candidates.size(), 0.0);
    Vector yb(n);
    Matrix xb(n, x.cols());
    Matrix wb(n, w.cols());
    for (int b = 0; b < m; ++b) {
        Rng rng(mix_seed(seed, static_cast<std::uint64_t>(b)));
        KernelSet ks;
        bool built = false;
        for (int attempt = 0; attempt < 10 && !built; ++attempt) {
            std::vector<int> idx = draw_indices(rng, n, stratify_by_y, strata);
            for (int i = 0; i < n; ++i) {
                yb[i] = y[idx[static_cast<size_t>(i)]];
                xb.row(i) = x.row(idx[static_cast<size_t>(i)]);
                if (w.cols() > 0) wb.row(i) = w.row(idx[static_cast<size_t>(i)]);
            }
            try {
                ks = build_kernels(yb, xb, wb, cfg);
                built = true;
            } catch (const Error&) {
            }
        }
        if (!built)
            throw BootstrapDegenerate("tune_by_bootstrap: 10 consecutive degenerate resamples");

        for (size_t c = 0; c < candidates.size(); ++c) {
            const auto& [nu, xi] = candidates[c];
            SubspaceBasis benv = envelope_basis(hybrid_from_set(ks, xi, cfg), nu);
            EstimateResult est = two_stage_estimate(ks.k_y, benv, d);
            loss[c] += 1.0 - trace_correlation(est.basis_z.columns, full_bases[c]);
        }
    }

    TuningReport report;
    report.score_kind = ScoreKind::BOOTSTRAP_VARIABILITY;
    double best = std::numeric_limits<double>::infinity();
    size_t best_idx = 0;
    for (size_t c = 0; c < candidates.size(); ++c) {
        const double score = loss[c] / static_cast<double>(m);
        report.candidates.push_back({candidates[c].first, candidates[c].second, score});
        const bool better =
            score < best ||
            (score == best && (candidates[c].first < candidates[best_idx].first ||
                               (candidates[c].first == candidates[best_idx].first &&
                                candidates[c].second < candidates[best_idx].second)));
        if (better) {
            best = score;
            best_idx = c;
        }
    }
    report.nu = candidates[best_idx].first;
    report.xi = candidates[best_idx].second;
    return report;
}

TuningReport tune_by_bootstrap(const Vector& y, const Matrix& x, const Matrix& w,
                               const KernelConfig& cfg, const std::vector<int>& nu_range,
                               const std::vector<double>& xi_grid, int d, int m,
                               std::uint64_t seed, bool stratify_by_y) {
    std::vector<std::pair<int, double>> candidates;
    std::vector<int> nus = nu_range;
    std::sort(nus.begin(), nus.end());
    for (int nu : nus)
        for (double xi : xi_grid) candidates.emplace_back(nu, xi);
    return tune_by_bootstrap(y, x, w, cfg, candidates, d, m, seed, stratify_by_y);
}

double benchmark_li2006(const Vector& y, const Matrix& x, const Matrix& w,
                        const KernelConfig& cfg) {
    if (w.cols() == 0) throw InvalidInput("benchmark_li2006: auxiliary variable required");
    KernelSet ks = build_kernels(y, x, w, cfg);
    EigenSystem es = sym_eigen(ks.k_partial.mat);
    Matrix comps = ks.std_data.z * es.vectors.leftCols(2);

    Matrix feats(y.size(), w.cols() + 2);
    feats.leftCols(w.cols()) = w;
    feats.rightCols(2) = comps;

    // drop exact duplicate columns so QDA covariances stay nonsingular
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < feats.cols(); ++j) {
        bool dup = false;
        for (Eigen::Index k : keep)
            if (feats.col(j) == feats.col(k)) {
                dup = true;
                break;
            }
        if (!dup) keep.push_back(j);
    }
    Matrix pruned(feats.rows(), static_cast<Eigen::Index>(keep.size()));
    for (size_t j = 0; j < keep.size(); ++j) pruned.col(static_cast<Eigen::Index>(j)) = feats.col(keep[j]);

    return qda_loo_accuracy(pruned, slice_discrete(y).labels);
}

}  // namespace envsdr
