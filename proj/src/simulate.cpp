#include "envsdr/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "envsdr/dimension.hpp"
#include "envsdr/rng.hpp"

#include <json.hpp>

namespace envsdr {

namespace {

void check_spec(const ModelSpec& spec) {
    const int min_p = spec.id == ModelId::M1 ? 4 : 6;
    if (spec.p < min_p) throw InvalidInput("generate: p too small for this model");
    if (spec.n < 2) throw InvalidInput("generate: n must be >= 2");
    if (!(spec.b > 0.0 && spec.b < 1.0)) throw InvalidInput("generate: b must be in (0,1)");
    if (spec.a < 0.0) throw InvalidInput("generate: a must be >= 0");
    if (spec.sigma <= 0.0) throw InvalidInput("generate: sigma must be > 0");
}

Vector m1_beta(int p, double b) {
    Vector v = Vector::Zero(p);
    v[2] = v[3] = b / std::sqrt(2.0);
    return v;
}

Vector m1_gamma(int p) {
    Vector v = Vector::Zero(p);
    v[0] = v[1] = 1.0 / std::sqrt(2.0);
    return v;
}

Vector m2_beta1(int p, double b) { return m1_beta(p, b); }

Vector m2_beta2(int p, double b) {
    Vector v = Vector::Zero(p);
    v[0] = v[1] = b / std::sqrt(2.0);
    return v;
}

Vector m2_alpha(int p) {
    Vector v = Vector::Zero(p);
    v[4] = v[5] = 1.0 / std::sqrt(2.0);
    return v;
}

Vector m2_gamma(int p) {
    Vector v = Vector::Zero(p);
    v[0] = v[1] = 1.0 / std::sqrt(10.0);
    v[2] = v[3] = 2.0 / std::sqrt(10.0);
    return v;
}

}  // namespace

SimData generate(const ModelSpec& spec, std::uint64_t seed) {
    check_spec(spec);
    Rng rng(seed);
    const int n = spec.n;
    const int p = spec.p;

    SimData out;
    out.x.resize(n, p);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < p; ++j) out.x(i, j) = rng.gauss();

    const double w_sd = std::sqrt(1.0 - spec.b * spec.b);
    if (spec.id == ModelId::M1) {
        Vector beta = m1_beta(p, spec.b);
        Vector gamma = m1_gamma(p);
        out.w.resize(n, 1);
        for (int i = 0; i < n; ++i) out.w(i, 0) = out.x.row(i).dot(beta) + w_sd * rng.gauss();
        out.y.resize(n);
        for (int i = 0; i < n; ++i)
            out.y[i] = out.x.row(i).dot(gamma) + spec.a * out.w(i, 0) + spec.sigma * rng.gauss();
    } else {
        Vector b1 = m2_beta1(p, spec.b);
        Vector b2 = m2_beta2(p, spec.b);
        Vector alpha = m2_alpha(p);
        Vector gamma = m2_gamma(p);
        out.w.resize(n, 2);
        for (int i = 0; i < n; ++i) out.w(i, 0) = out.x.row(i).dot(b1) + w_sd * rng.gauss();
        for (int i = 0; i < n; ++i) out.w(i, 1) = out.x.row(i).dot(b2) + w_sd * rng.gauss();
        out.y.resize(n);
        for (int i = 0; i < n; ++i) {
            const double mean = (1.0 + out.x.row(i).dot(alpha)) *
                                (spec.a * (out.w(i, 0) + out.w(i, 1)) + out.x.row(i).dot(gamma));
            out.y[i] = mean + spec.sigma * rng.gauss();
        }
    }
    return out;
}

TruthBases truth_bases(const ModelSpec& spec) {
    check_spec(spec);
    TruthBases t;
    if (spec.id == ModelId::M1) {
        Vector beta = m1_beta(spec.p, spec.b);
        Vector gamma = m1_gamma(spec.p);
        Vector dir = spec.a * beta + gamma;
        t.s_yx = dir / dir.norm();
        Matrix env(spec.p, 2);
        env.col(0) = beta;
        env.col(1) = gamma;
        t.s_env = orthonormalize(env);
        t.d_true = 1;
        t.d_env_true = 2;
    } else {
        Vector b1 = m2_beta1(spec.p, spec.b);
        Vector b2 = m2_beta2(spec.p, spec.b);
        Vector alpha = m2_alpha(spec.p);
        Vector gamma = m2_gamma(spec.p);
        Matrix cs(spec.p, 2);
        cs.col(0) = alpha;
        cs.col(1) = spec.a * (b1 + b2) + gamma;
        t.s_yx = orthonormalize(cs);
        Matrix env(spec.p, 3);
        env.col(0) = alpha;
        env.col(1) = b1;
        env.col(2) = b2;
        t.s_env = orthonormalize(env);
        t.d_true = 2;
        t.d_env_true = 3;
    }
    return t;
}

KernelConfig default_kernel_config(int n) {
    KernelConfig cfg;
    cfg.h_y = 10;
    cfg.h_w = n < 200 ? 2 : 3;
    cfg.h_inner = 3;
    return cfg;
}

ReplicateEstimates replicate_estimates(const SimData& data, const TruthBases& truth,
                                       const KernelConfig& kcfg,
                                       const std::vector<double>& xi_grid, int bootstraps,
                                       std::uint64_t seed) {
    if (xi_grid.empty()) throw InvalidInput("replicate_estimates: empty xi grid");
    const int n = static_cast<int>(data.y.size());
    const double cn = std::pow(static_cast<double>(n), 0.25);
    const int d = truth.d_true;

    KernelSet ks = build_kernels(data.y, data.x, data.w, kcfg);
    const Matrix* sinv = &ks.std_data.sigma_inv_sqrt;

    // full-data pieces per xi; envelope rank floors at d so the second stage
    // always has room for the requested number of directions
    const size_t g = xi_grid.size();
    std::vector<int> nus(g);
    std::vector<EstimateResult> bases(g);
    for (size_t i = 0; i < g; ++i) {
        KernelMatrix ke = hybrid_from_set(ks, xi_grid[i], kcfg);
        Vector lam = (static_cast<double>(n) / 2.0) * sym_eigen(ke.mat).values;
        nus[i] = std::max(bic_rank(lam, n, cn, -1, BicPenalty::TRIANGULAR), d);
        bases[i] = two_stage_estimate(ks.k_y, envelope_basis(ke, nus[i]), d, sinv);
    }

    int nu0 = std::max(
        bic_rank((static_cast<double>(n) / 2.0) * sym_eigen(ks.k_joint.mat).values, n, cn, -1,
                 BicPenalty::TRIANGULAR),
        d);
    EstimateResult naive = two_stage_estimate(ks.k_y, envelope_basis(ks.k_joint, nu0), d, sinv);
    naive.method = Method::TWO_STAGE_NAIVE;
    EstimateResult direct = direct_estimate(ks.k_y, d, sinv);

    // shared resamples: variability of every candidate and of the naive and
    // direct estimators against their full-data versions
    std::vector<double> loss(g, 0.0);
    double loss_naive = 0.0, loss_direct = 0.0;
    int used = 0;
    Vector yb(n);
    Matrix xb(n, data.x.cols());
    Matrix wb(n, data.w.cols());
    for (int bidx = 0; bidx < bootstraps; ++bidx) {
        std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(bidx + 1));
        Rng rng(splitmix64(state));
        KernelSet kb;
        bool built = false;
        for (int attempt = 0; attempt < 10 && !built; ++attempt) {
            for (int i = 0; i < n; ++i) {
                const int r = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
                yb[i] = data.y[r];
                xb.row(i) = data.x.row(r);
                wb.row(i) = data.w.row(r);
            }
            try {
                kb = build_kernels(yb, xb, wb, kcfg);
                built = true;
            } catch (const Error&) {
            }
        }
        if (!built) continue;
        ++used;
        for (size_t i = 0; i < g; ++i) {
            KernelMatrix keb = hybrid_from_set(kb, xi_grid[i], kcfg);
            EstimateResult eb = two_stage_estimate(kb.k_y, envelope_basis(keb, nus[i]), d);
            loss[i] += 1.0 - trace_correlation(eb.basis_z, bases[i].basis_z);
        }
        EstimateResult nb = two_stage_estimate(
            kb.k_y, envelope_basis(kb.k_joint, nu0), d);
        loss_naive += 1.0 - trace_correlation(nb.basis_z, naive.basis_z);
        EstimateResult db = direct_estimate(kb.k_y, d);
        loss_direct += 1.0 - trace_correlation(db.basis_z, direct.basis_z);
    }
    if (used == 0) throw BootstrapDegenerate("replicate_estimates: every resample degenerate");

    size_t star = 0;
    for (size_t i = 1; i < g; ++i)
        if (loss[i] < loss[star]) star = i;

    ReplicateEstimates out;
    out.xi_star = xi_grid[star];
    out.nu_star = nus[star];
    out.r_hat = trace_correlation(bases[star].basis_x, truth.s_yx);
    out.r_naive = trace_correlation(naive.basis_x, truth.s_yx);
    out.r_direct = trace_correlation(direct.basis_x, truth.s_yx);
    out.var_hat = loss[star] / used;
    out.var_naive = loss_naive / used;
    out.var_direct = loss_direct / used;
    return out;
}

std::vector<CellStats> run_study(const std::vector<StudyCell>& grid, const StudyConfig& cfg) {
    if (grid.empty()) throw ConfigError("run_study: empty grid");
    if (cfg.replicates < 1) throw ConfigError("run_study: replicates must be >= 1");
    const std::vector<double> xi_grid = cfg.xi_grid.empty() ? default_xi_grid() : cfg.xi_grid;

    std::vector<CellStats> out;
    out.reserve(grid.size());
    for (size_t c = 0; c < grid.size(); ++c) {
        const StudyCell& cell = grid[c];
        check_spec(cell.spec);
        const int n = cell.spec.n;
        const int p = cell.spec.p;
        const double cn = cell.cn_mult * std::pow(static_cast<double>(n), 0.25);
        const KernelConfig kcfg = default_kernel_config(n);
        const TruthBases truth = truth_bases(cell.spec);

        CellStats st;
        st.spec = cell.spec;
        st.cn_mult = cell.cn_mult;
        st.replicates = cfg.replicates;
        st.p_d_hat.assign(static_cast<size_t>(p), 0.0);
        st.p_d_tilde.assign(static_cast<size_t>(p), 0.0);

        std::vector<double> rh, rn, rd;
        for (int r = 0; r < cfg.replicates; ++r) {
            // data seed depends on the model cell and replicate only, so the
            // same draws are reused across penalty multipliers
            std::uint64_t ds = cfg.seed;
            ds = splitmix64(ds) ^ (static_cast<std::uint64_t>(cell.spec.id) * 0x9e3779b97f4a7c15ULL +
                                   static_cast<std::uint64_t>(r));
            std::uint64_t data_seed = splitmix64(ds);
            SimData data = generate(cell.spec, data_seed);

            if (cfg.compute_dimensions) {
                KernelSet ks = build_kernels(data.y, data.x, data.w, kcfg);
                DimSelection sel = select_d(
                    ks.k_y, [&](double xi) { return hybrid_from_set(ks, xi, kcfg); }, xi_grid,
                    n, cn);
                const int dt =
                    select_d_direct(ks.k_y, n, cn, ks.y_slices.H);
                st.p_d_hat[static_cast<size_t>(sel.d - 1)] += 1.0;
                st.p_d_tilde[static_cast<size_t>(dt - 1)] += 1.0;
            }
            if (cfg.compute_estimates) {
                std::uint64_t boot_seed = splitmix64(data_seed);
                ReplicateEstimates est = replicate_estimates(data, truth, kcfg, xi_grid,
                                                             cfg.bootstraps, boot_seed);
                rh.push_back(est.r_hat);
                rn.push_back(est.r_naive);
                rd.push_back(est.r_direct);
                st.mean_var_hat += est.var_hat;
                st.mean_var_naive += est.var_naive;
                st.mean_var_direct += est.var_direct;
                st.mean_xi_star += est.xi_star;
                st.mean_nu_star += est.nu_star;
            }
        }
        const double R = static_cast<double>(cfg.replicates);
        for (auto& v : st.p_d_hat) v /= R;
        for (auto& v : st.p_d_tilde) v /= R;
        if (cfg.compute_estimates) {
            auto mean_sd = [&](const std::vector<double>& v, double& m, double& s) {
                m = 0.0;
                for (double x : v) m += x;
                m /= static_cast<double>(v.size());
                s = 0.0;
                if (v.size() > 1) {
                    for (double x : v) s += (x - m) * (x - m);
                    s = std::sqrt(s / static_cast<double>(v.size() - 1));
                }
            };
            mean_sd(rh, st.mean_r_hat, st.sd_r_hat);
            mean_sd(rn, st.mean_r_naive, st.sd_r_naive);
            mean_sd(rd, st.mean_r_direct, st.sd_r_direct);
            st.mean_var_hat /= R;
            st.mean_var_naive /= R;
            st.mean_var_direct /= R;
            st.mean_xi_star /= R;
            st.mean_nu_star /= R;
        }
        out.push_back(std::move(st));
    }
    return out;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* model_name(ModelId id) { return id == ModelId::M1 ? "m1" : "m2"; }

}  // namespace

void write_study_csv(const std::vector<CellStats>& stats, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw InvalidInput("write_study_csv: cannot open " + path);
    f << "model,n,p,a,b,sigma,cn_mult,replicates,statistic,value\n";
    for (const auto& st : stats) {
        auto row = [&](const std::string& name, double value) {
            f << model_name(st.spec.id) << ',' << st.spec.n << ',' << st.spec.p << ','
              << fmt17(st.spec.a) << ',' << fmt17(st.spec.b) << ',' << fmt17(st.spec.sigma) << ','
              << fmt17(st.cn_mult) << ',' << st.replicates << ',' << name << ',' << fmt17(value)
              << '\n';
        };
        row("mean_r_hat", st.mean_r_hat);
        row("sd_r_hat", st.sd_r_hat);
        row("mean_r_naive", st.mean_r_naive);
        row("sd_r_naive", st.sd_r_naive);
        row("mean_r_direct", st.mean_r_direct);
        row("sd_r_direct", st.sd_r_direct);
        row("mean_var_hat", st.mean_var_hat);
        row("mean_var_naive", st.mean_var_naive);
        row("mean_var_direct", st.mean_var_direct);
        row("mean_xi_star", st.mean_xi_star);
        row("mean_nu_star", st.mean_nu_star);
        for (size_t k = 0; k < st.p_d_hat.size(); ++k)
            row("p_d_hat_" + std::to_string(k + 1), st.p_d_hat[k]);
        for (size_t k = 0; k < st.p_d_tilde.size(); ++k)
            row("p_d_tilde_" + std::to_string(k + 1), st.p_d_tilde[k]);
    }
}

void write_study_metadata(const std::vector<StudyCell>& grid, const StudyConfig& cfg,
                          const std::string& path) {
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["rng"] = kRngName;
    j["replicates"] = cfg.replicates;
    j["bootstraps"] = cfg.bootstraps;
    j["xi_grid"] = cfg.xi_grid.empty() ? default_xi_grid() : cfg.xi_grid;
    j["variability_note"] =
        "variability panels are 1 - mean bootstrap trace correlation to the full-data "
        "estimate (interpretation; the source text does not define the functional)";
    j["cells"] = nlohmann::json::array();
    for (const auto& cell : grid) {
        nlohmann::json c;
        c["model"] = model_name(cell.spec.id);
        c["n"] = cell.spec.n;
        c["p"] = cell.spec.p;
        c["a"] = cell.spec.a;
        c["b"] = cell.spec.b;
        c["sigma"] = cell.spec.sigma;
        c["cn_mult"] = cell.cn_mult;
        j["cells"].push_back(c);
    }
    std::ofstream f(path);
    if (!f) throw InvalidInput("write_study_metadata: cannot open " + path);
    f << j.dump(2) << '\n';
}

}  // namespace envsdr
