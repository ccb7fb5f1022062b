#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "envsdr/dataset.hpp"
#include "envsdr/dimension.hpp"
#include "envsdr/estimator.hpp"
#include "envsdr/simulate.hpp"
#include "envsdr/tuning.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace envsdr;

namespace {

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
    std::vector<double> out;
    for (const auto& tok : split_list(s)) {
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw ConfigError(std::string(what) + ": cannot parse '" + tok + "'");
        }
    }
    if (out.empty()) throw ConfigError(std::string(what) + ": empty list");
    return out;
}

std::vector<double> make_xi_grid(int points, double lo, double hi) {
    if (points < 1) throw ConfigError("xi grid needs at least 1 point");
    if (!(lo > 0.0 && hi < 1.0 && lo <= hi)) throw ConfigError("xi grid must lie inside (0,1)");
    std::vector<double> g(static_cast<size_t>(points));
    for (int i = 0; i < points; ++i)
        g[static_cast<size_t>(i)] =
            points == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (points - 1);
    return g;
}

struct SchemaArgs {
    std::string y_col;
    std::string x_cols;
    std::string w_cols;
    std::string zero_missing;

    Schema build() const {
        if (y_col.empty() || x_cols.empty())
            throw ConfigError("schema: --y and --x are required");
        Schema s;
        auto zset = split_list(zero_missing);
        auto zero = [&](const std::string& name) {
            for (const auto& z : zset)
                if (z == name) return true;
            return false;
        };
        s.columns.push_back({y_col, Role::RESPONSE, zero(y_col)});
        for (const auto& c : split_list(x_cols)) s.columns.push_back({c, Role::COVARIATE, zero(c)});
        for (const auto& c : split_list(w_cols)) s.columns.push_back({c, Role::AUXILIARY, zero(c)});
        return s;
    }
};

void add_schema_options(CLI::App* cmd, SchemaArgs& args) {
    cmd->add_option("--y", args.y_col, "response column name");
    cmd->add_option("--x", args.x_cols, "comma-separated covariate columns");
    cmd->add_option("--w", args.w_cols, "comma-separated auxiliary columns");
    cmd->add_option("--zero-missing", args.zero_missing,
                    "columns where 0 marks a missing value");
}

struct KernelArgs {
    std::string y_kernel = "sir";
    int h_y = 10;
    int h_w = 3;
    int h_inner = 3;
    bool normalize = false;

    KernelConfig build() const {
        KernelConfig cfg;
        if (y_kernel == "sir") cfg.y_kernel = KernelKind::SIR;
        else if (y_kernel == "save") cfg.y_kernel = KernelKind::SAVE;
        else throw ConfigError("--y-kernel must be sir or save");
        cfg.h_y = h_y;
        cfg.h_w = h_w;
        cfg.h_inner = h_inner;
        cfg.normalize_hybrid = normalize;
        return cfg;
    }
};

void add_kernel_options(CLI::App* cmd, KernelArgs& args) {
    cmd->add_option("--y-kernel", args.y_kernel, "response kernel: sir|save");
    cmd->add_option("--hy", args.h_y, "response slice count");
    cmd->add_option("--hw", args.h_w, "slices per auxiliary column");
    cmd->add_option("--inner", args.h_inner, "response slices inside each auxiliary slice");
    cmd->add_flag("--normalize-kernels", args.normalize,
                  "scale both kernels to unit trace before mixing");
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir);
}

void write_json(const json& j, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot open " + path);
    f << j.dump(2) << '\n';
}

void check_n_gt_p(const DataSet& ds) {
    if (ds.n <= ds.x.cols())
        throw NotPSD("need n > p for an invertible covariance (n=" + std::to_string(ds.n) +
                     ", p=" + std::to_string(ds.x.cols()) +
                     "); reduce covariates or gather more rows");
}

json dataset_echo(const DataSet& ds, const std::string& input) {
    json j;
    j["input"] = input;
    j["n"] = ds.n;
    j["dropped_rows"] = ds.dropped_rows;
    j["p"] = ds.x.cols();
    j["response"] = ds.y_name;
    j["covariates"] = ds.x_names;
    j["auxiliary"] = ds.w_names;
    return j;
}

// ---- sim ----------------------------------------------------------------

struct SimArgs {
    std::string model = "m1";
    std::string a_list = "1";
    std::string b_list = "0.1";
    std::string cn_list = "1";
    int n = 150;
    int p = 9;
    double sigma = 0.5;
    int replicates = 200;
    int bootstraps = 100;
    int xi_points = 41;
    double xi_min = 0.10;
    double xi_max = 0.90;
    bool no_estimates = false;
    bool no_dimensions = false;
    std::string emit_data;
    std::uint64_t seed = 20240601;
    std::string out_dir = "out";
};

int cmd_sim(const SimArgs& a) {
    ModelId id;
    if (a.model == "m1") id = ModelId::M1;
    else if (a.model == "m2") id = ModelId::M2;
    else throw ConfigError("--model must be m1 or m2");

    if (!a.emit_data.empty()) {
        ModelSpec spec{id, a.n, a.p, parse_doubles(a.a_list, "--a")[0],
                       parse_doubles(a.b_list, "--b")[0], a.sigma};
        SimData data = generate(spec, a.seed);
        std::vector<std::string> names{"y"};
        std::vector<Vector> cols{data.y};
        for (int j = 0; j < data.x.cols(); ++j) {
            names.push_back("x" + std::to_string(j + 1));
            cols.push_back(data.x.col(j));
        }
        for (int j = 0; j < data.w.cols(); ++j) {
            names.push_back("w" + std::to_string(j + 1));
            cols.push_back(data.w.col(j));
        }
        write_csv(a.emit_data, names, cols);
        std::cout << "wrote " << a.emit_data << " (n=" << a.n << ", p=" << a.p << ")\n";
        return 0;
    }

    std::vector<StudyCell> grid;
    for (double av : parse_doubles(a.a_list, "--a"))
        for (double bv : parse_doubles(a.b_list, "--b"))
            for (double cm : parse_doubles(a.cn_list, "--cn-mult"))
                grid.push_back({ModelSpec{id, a.n, a.p, av, bv, a.sigma}, cm});

    StudyConfig cfg;
    cfg.replicates = a.replicates;
    cfg.bootstraps = a.bootstraps;
    cfg.xi_grid = make_xi_grid(a.xi_points, a.xi_min, a.xi_max);
    cfg.seed = a.seed;
    cfg.compute_estimates = !a.no_estimates;
    cfg.compute_dimensions = !a.no_dimensions;

    ensure_out_dir(a.out_dir);
    std::vector<CellStats> stats = run_study(grid, cfg);
    const std::string csv = a.out_dir + "/study.csv";
    const std::string meta = a.out_dir + "/metadata.json";
    write_study_csv(stats, csv);
    write_study_metadata(grid, cfg, meta);
    std::cout << "wrote " << csv << " and " << meta << " (" << stats.size() << " cells, "
              << cfg.replicates << " replicates)\n";
    return 0;
}

// ---- shared fitting pieces ----------------------------------------------

json eigen_table(const KernelMatrix& k, const char* name) {
    EigenSystem es = sym_eigen(k.mat);
    json j;
    j["kernel"] = name;
    j["eigenvalues"] = std::vector<double>(es.values.data(), es.values.data() + es.values.size());
    return j;
}

// ---- fit ------------------------------------------------------------------

struct FitArgs {
    std::string input;
    SchemaArgs schema;
    KernelArgs kernel;
    double cn_mult = 1.0;
    double xi = 0.5;
    int nu = 0;  // 0 = envelope rank from the selector
    int d = 0;   // 0 = selected structural dimension
    int xi_points = 41;
    double xi_min = 0.10, xi_max = 0.90;
    std::string out_dir = "out";
};

int cmd_fit(const FitArgs& a) {
    DataSet ds = ingest_csv(a.input, a.schema.build());
    check_n_gt_p(ds);
    KernelConfig kcfg = a.kernel.build();
    const int n = ds.n;
    const double cn = a.cn_mult * std::pow(static_cast<double>(n), 0.25);
    ensure_out_dir(a.out_dir);

    json report = dataset_echo(ds, a.input);
    report["cn"] = cn;
    report["kernel_config"] = {{"y_kernel", a.kernel.y_kernel}, {"hy", kcfg.h_y},
                               {"hw", kcfg.h_w},               {"inner", kcfg.h_inner},
                               {"normalize", kcfg.normalize_hybrid}};

    std::vector<std::string> base_names;
    std::vector<Vector> base_cols;

    if (ds.w.cols() == 0) {
        // direct estimate only
        KernelSet ks = build_kernels(ds.y, ds.x, ds.w, kcfg);
        const int dt = select_d_direct(ks.k_y, n, cn, ks.y_slices.H);
        const int d = a.d > 0 ? a.d : dt;
        EstimateResult direct = direct_estimate(ks.k_y, d, &ks.std_data.sigma_inv_sqrt);
        report["note"] = "no auxiliary columns: two-stage estimate skipped";
        report["d_tilde"] = dt;
        report["d_used"] = d;
        report["kernels"] = json::array({eigen_table(ks.k_y, "response")});
        for (int j = 0; j < d; ++j) {
            base_names.push_back("direct_z" + std::to_string(j + 1));
            base_cols.push_back(direct.basis_z.columns.col(j));
        }
        for (int j = 0; j < d; ++j) {
            base_names.push_back("direct_x" + std::to_string(j + 1));
            base_cols.push_back(direct.basis_x.col(j));
        }
        write_csv(a.out_dir + "/bases.csv", base_names, base_cols);
        write_json(report, a.out_dir + "/fit.json");
        std::cout << "direct-only fit: d_tilde=" << dt << ", wrote " << a.out_dir << "/fit.json\n";
        return 0;
    }

    KernelSet ks = build_kernels(ds.y, ds.x, ds.w, kcfg);
    auto builder = [&](double xi) { return hybrid_from_set(ks, xi, kcfg); };
    const std::vector<double> grid = make_xi_grid(a.xi_points, a.xi_min, a.xi_max);
    DimSelection sel = select_d(ks.k_y, builder, grid, n, cn);
    const int dt = select_d_direct(ks.k_y, n, cn, ks.y_slices.H);

    const int d = a.d > 0 ? a.d : sel.d;
    const int nu = a.nu > 0 ? a.nu : std::max(sel.d_env, d);
    if (!(a.xi > 0.0 && a.xi < 1.0)) throw ConfigError("--xi must lie inside (0,1)");

    const Matrix* sinv = &ks.std_data.sigma_inv_sqrt;
    EstimateResult direct = direct_estimate(ks.k_y, d, sinv);
    KernelMatrix khyb = builder(a.xi);
    EstimateResult hybrid = two_stage_estimate(ks.k_y, envelope_basis(khyb, nu), d, sinv);
    hybrid.xi = a.xi;
    const int nu0 = std::max(
        bic_rank((n / 2.0) * sym_eigen(ks.k_joint.mat).values, n, cn, -1, BicPenalty::TRIANGULAR),
        d);
    EstimateResult naive = two_stage_estimate(ks.k_y, envelope_basis(ks.k_joint, nu0), d, sinv);

    report["d_hat"] = sel.d;
    report["d_env_hat"] = sel.d_env;
    report["d_tilde"] = dt;
    report["d_used"] = d;
    report["nu_used"] = nu;
    report["nu_naive"] = nu0;
    report["xi_used"] = a.xi;
    report["kernels"] = json::array({eigen_table(ks.k_y, "response"),
                                     eigen_table(ks.k_w, "auxiliary"),
                                     eigen_table(ks.k_partial, "partial"),
                                     eigen_table(ks.k_joint, "joint"),
                                     eigen_table(khyb, "hybrid")});

    auto push_basis = [&](const char* tag, const EstimateResult& est) {
        for (int j = 0; j < est.basis_z.rank(); ++j) {
            base_names.push_back(std::string(tag) + "_z" + std::to_string(j + 1));
            base_cols.push_back(est.basis_z.columns.col(j));
        }
        for (int j = 0; j < est.basis_x.cols(); ++j) {
            base_names.push_back(std::string(tag) + "_x" + std::to_string(j + 1));
            base_cols.push_back(est.basis_x.col(j));
        }
    };
    push_basis("two_stage", hybrid);
    push_basis("naive", naive);
    push_basis("direct", direct);
    write_csv(a.out_dir + "/bases.csv", base_names, base_cols);
    write_json(report, a.out_dir + "/fit.json");
    std::cout << "fit: d_hat=" << sel.d << " d_env_hat=" << sel.d_env << " d_tilde=" << dt
              << " (nu=" << nu << ", xi=" << a.xi << "), wrote " << a.out_dir << "/fit.json\n";
    return 0;
}

// ---- select-dim -----------------------------------------------------------

struct SelectArgs {
    std::string input;
    SchemaArgs schema;
    KernelArgs kernel;
    double cn_mult = 1.0;
    int xi_points = 41;
    double xi_min = 0.10, xi_max = 0.90;
    std::string out_dir = "out";
};

int cmd_select_dim(const SelectArgs& a) {
    DataSet ds = ingest_csv(a.input, a.schema.build());
    check_n_gt_p(ds);
    if (ds.w.cols() == 0)
        throw InvalidInput("select-dim needs auxiliary columns; use fit for the direct rank");
    KernelConfig kcfg = a.kernel.build();
    const int n = ds.n;
    const double cn = a.cn_mult * std::pow(static_cast<double>(n), 0.25);

    KernelSet ks = build_kernels(ds.y, ds.x, ds.w, kcfg);
    auto builder = [&](double xi) { return hybrid_from_set(ks, xi, kcfg); };
    const std::vector<double> grid = make_xi_grid(a.xi_points, a.xi_min, a.xi_max);
    DimSelection sel = select_d(ks.k_y, builder, grid, n, cn);
    const int dt = select_d_direct(ks.k_y, n, cn, ks.y_slices.H);

    ensure_out_dir(a.out_dir);
    json report = dataset_echo(ds, a.input);
    report["cn"] = cn;
    report["d_hat"] = sel.d;
    report["d_env_hat"] = sel.d_env;
    report["d_tilde"] = dt;
    report["xi_grid"] = sel.xi_grid;
    report["d_env_by_xi"] = sel.d_env_by_xi;
    report["d_by_xi"] = sel.d_by_xi;
    write_json(report, a.out_dir + "/dimensions.json");
    std::cout << "d_hat=" << sel.d << " d_env_hat=" << sel.d_env << " d_tilde=" << dt
              << ", wrote " << a.out_dir << "/dimensions.json\n";
    return 0;
}

// ---- tune -------------------------------------------------------------------

struct TuneArgs {
    std::string input;
    SchemaArgs schema;
    KernelArgs kernel;
    std::string method = "loo";
    int m = 100;
    int components = 0;
    int nu_min = 0, nu_max = 0;
    int d = 0;
    double cn_mult = 1.0;
    int xi_points = 41;
    double xi_min = 0.10, xi_max = 0.90;
    std::uint64_t seed = 20240601;
    std::string out_dir = "out";
};

int cmd_tune(const TuneArgs& a) {
    DataSet ds = ingest_csv(a.input, a.schema.build());
    check_n_gt_p(ds);
    if (ds.w.cols() == 0) throw InvalidInput("tune needs auxiliary columns");
    KernelConfig kcfg = a.kernel.build();
    const int n = ds.n;
    const int p = static_cast<int>(ds.x.cols());
    const double cn = a.cn_mult * std::pow(static_cast<double>(n), 0.25);
    const std::vector<double> grid = make_xi_grid(a.xi_points, a.xi_min, a.xi_max);

    KernelSet ks = build_kernels(ds.y, ds.x, ds.w, kcfg);
    auto builder = [&](double xi) { return hybrid_from_set(ks, xi, kcfg); };
    DimSelection sel = select_d(ks.k_y, builder, grid, n, cn);

    int nu_lo = a.nu_min > 0 ? a.nu_min : sel.d;
    int nu_hi = a.nu_max > 0 ? a.nu_max : std::min(p, sel.d_env + 2);
    if (nu_lo > nu_hi) throw ConfigError("empty nu range");
    std::vector<int> nus;
    for (int nu = nu_lo; nu <= nu_hi; ++nu) nus.push_back(nu);

    TuningReport rep;
    if (a.method == "loo") {
        rep = tune_by_loo(ds.y, ds.x, ds.w, kcfg, nus, grid, a.components, cn);
    } else if (a.method == "bootstrap") {
        const int d = a.d > 0 ? a.d : sel.d;
        rep = tune_by_bootstrap(ds.y, ds.x, ds.w, kcfg, nus, grid, d, a.m, a.seed);
    } else {
        throw ConfigError("--method must be loo or bootstrap");
    }

    ensure_out_dir(a.out_dir);
    json report = dataset_echo(ds, a.input);
    report["method"] = a.method;
    report["d_hat"] = sel.d;
    report["d_env_hat"] = sel.d_env;
    report["nu_range"] = {nu_lo, nu_hi};
    report["chosen"] = {{"nu", rep.nu}, {"xi", rep.xi}};
    json cands = json::array();
    for (const auto& c : rep.candidates)
        cands.push_back({{"nu", c.nu}, {"xi", c.xi}, {"score", c.score}});
    report["candidates"] = cands;
    write_json(report, a.out_dir + "/tuning.json");
    std::cout << "chosen (nu, xi) = (" << rep.nu << ", " << rep.xi << "), wrote " << a.out_dir
              << "/tuning.json\n";
    return 0;
}

// ---- pima -------------------------------------------------------------------

struct PimaArgs {
    std::string input = "data/pima.csv";
    int h_w = 3;
    int components = 0;
    std::string out_dir = "out";
};

int cmd_pima(const PimaArgs& a) {
    DataSet ds = ingest_csv(a.input, pima_schema());
    check_n_gt_p(ds);
    if (ds.w.cols() == 0) throw InvalidInput("auxiliary column missing; use the fit command");

    KernelConfig kcfg;
    kcfg.y_kernel = KernelKind::SAVE;  // binary response: the first-order kernel is rank 1
    kcfg.h_y = 2;
    kcfg.h_w = a.h_w;
    kcfg.h_inner = 2;
    const int n = ds.n;
    const int p = static_cast<int>(ds.x.cols());
    const double cn = std::pow(static_cast<double>(n), 0.25);
    const std::vector<double> grid = default_xi_grid();

    KernelSet ks = build_kernels(ds.y, ds.x, ds.w, kcfg);
    auto builder = [&](double xi) { return hybrid_from_set(ks, xi, kcfg); };
    DimSelection sel = select_d(ks.k_y, builder, grid, n, cn);

    std::vector<int> nus;
    for (int nu = sel.d; nu <= std::min(p, sel.d_env + 2); ++nu) nus.push_back(nu);
    TuningReport rep = tune_by_loo(ds.y, ds.x, ds.w, kcfg, nus, grid, a.components, cn);

    const Matrix* sinv = &ks.std_data.sigma_inv_sqrt;
    KernelMatrix khyb = builder(rep.xi);
    const int d_show = std::min(3, rep.nu);
    EstimateResult two_stage =
        two_stage_estimate(ks.k_y, envelope_basis(khyb, rep.nu), d_show, sinv);
    EstimateResult direct = direct_estimate(ks.k_y, std::min(3, p), sinv);

    const std::vector<int> labels = slice_discrete(ds.y).labels;
    Matrix s_hat = ks.std_data.z * two_stage.basis_z.columns;
    Matrix s_tilde = ks.std_data.z * direct.basis_z.columns;
    auto loo_on = [&](const Matrix& scores, int k) {
        return qda_loo_accuracy(scores.leftCols(k), labels);
    };
    const double ca2_hat = loo_on(s_hat, std::min(2, d_show));
    const double ca2_tilde = loo_on(s_tilde, 2);
    const double ca3_tilde = loo_on(s_tilde, 3);
    const double bench = benchmark_li2006(ds.y, ds.x, ds.w, kcfg);

    ensure_out_dir(a.out_dir);
    json report = dataset_echo(ds, a.input);
    report["d_hat"] = sel.d;
    report["d_env_hat"] = sel.d_env;
    report["chosen"] = {{"nu", rep.nu}, {"xi", rep.xi}};
    report["loo_ca"] = {{"two_stage_2", ca2_hat},
                        {"direct_2", ca2_tilde},
                        {"direct_3", ca3_tilde},
                        {"benchmark", bench}};
    write_json(report, a.out_dir + "/pima.json");

    std::vector<std::string> names{"y"};
    std::vector<Vector> cols{ds.y};
    for (int j = 0; j < s_hat.cols(); ++j) {
        names.push_back("two_stage_s" + std::to_string(j + 1));
        cols.push_back(s_hat.col(j));
    }
    for (int j = 0; j < s_tilde.cols(); ++j) {
        names.push_back("direct_s" + std::to_string(j + 1));
        cols.push_back(s_tilde.col(j));
    }
    write_csv(a.out_dir + "/pima_scores.csv", names, cols);

    std::cout << "n=" << n << " (dropped " << ds.dropped_rows << ")\n"
              << "chosen (nu, xi) = (" << rep.nu << ", " << rep.xi << ")\n"
              << "LOO CA: two-stage(2)=" << ca2_hat << " direct(2)=" << ca2_tilde
              << " direct(3)=" << ca3_tilde << " benchmark=" << bench << "\n"
              << "wrote " << a.out_dir << "/pima.json and pima_scores.csv\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-stage envelope dimension reduction toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file");

    int threads = 1;
    app.add_option("--threads", threads, "reserved; this build runs single-threaded");

    SimArgs sim_args;
    auto* sim = app.add_subcommand("sim", "simulation study: trace correlations and rank selection");
    sim->add_option("--model", sim_args.model, "m1 or m2");
    sim->add_option("--a", sim_args.a_list, "signal strengths, comma list");
    sim->add_option("--b", sim_args.b_list, "auxiliary correlations, comma list");
    sim->add_option("--cn-mult", sim_args.cn_list, "penalty multipliers, comma list");
    sim->add_option("--n", sim_args.n, "sample size");
    sim->add_option("--p", sim_args.p, "covariate dimension");
    sim->add_option("--sigma", sim_args.sigma, "noise standard deviation");
    sim->add_option("--replicates", sim_args.replicates, "Monte Carlo replicates");
    sim->add_option("--bootstraps", sim_args.bootstraps, "bootstrap resamples per replicate");
    sim->add_option("--xi-points", sim_args.xi_points, "xi grid size");
    sim->add_option("--xi-min", sim_args.xi_min, "xi grid start");
    sim->add_option("--xi-max", sim_args.xi_max, "xi grid end");
    sim->add_flag("--no-estimates", sim_args.no_estimates, "skip trace-correlation estimates");
    sim->add_flag("--no-dimensions", sim_args.no_dimensions, "skip rank selection");
    sim->add_option("--emit-data", sim_args.emit_data, "write one generated dataset CSV and exit");
    sim->add_option("--seed", sim_args.seed, "study seed");
    sim->add_option("--out-dir", sim_args.out_dir, "output directory");

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "estimate reduction bases on a CSV dataset");
    fit->add_option("--input", fit_args.input, "input CSV")->required();
    add_schema_options(fit, fit_args.schema);
    add_kernel_options(fit, fit_args.kernel);
    fit->add_option("--cn-mult", fit_args.cn_mult, "penalty multiplier on n^(1/4)");
    fit->add_option("--xi", fit_args.xi, "kernel mixing weight");
    fit->add_option("--nu", fit_args.nu, "envelope rank override");
    fit->add_option("--d", fit_args.d, "structural dimension override");
    fit->add_option("--xi-points", fit_args.xi_points, "xi grid size for rank selection");
    fit->add_option("--xi-min", fit_args.xi_min, "xi grid start");
    fit->add_option("--xi-max", fit_args.xi_max, "xi grid end");
    fit->add_option("--out-dir", fit_args.out_dir, "output directory");

    SelectArgs select_args;
    auto* seldim = app.add_subcommand("select-dim", "rank selection report");
    seldim->add_option("--input", select_args.input, "input CSV")->required();
    add_schema_options(seldim, select_args.schema);
    add_kernel_options(seldim, select_args.kernel);
    seldim->add_option("--cn-mult", select_args.cn_mult, "penalty multiplier on n^(1/4)");
    seldim->add_option("--xi-points", select_args.xi_points, "xi grid size");
    seldim->add_option("--xi-min", select_args.xi_min, "xi grid start");
    seldim->add_option("--xi-max", select_args.xi_max, "xi grid end");
    seldim->add_option("--out-dir", select_args.out_dir, "output directory");

    TuneArgs tune_args;
    auto* tune = app.add_subcommand("tune", "choose (nu, xi) by LOO accuracy or bootstrap stability");
    tune->add_option("--input", tune_args.input, "input CSV")->required();
    add_schema_options(tune, tune_args.schema);
    add_kernel_options(tune, tune_args.kernel);
    tune->add_option("--method", tune_args.method, "loo or bootstrap");
    tune->add_option("--m", tune_args.m, "bootstrap resamples");
    tune->add_option("--components", tune_args.components,
                     "components scored by LOO accuracy (0 = selected d)");
    tune->add_option("--nu-min", tune_args.nu_min, "smallest envelope rank");
    tune->add_option("--nu-max", tune_args.nu_max, "largest envelope rank");
    tune->add_option("--d", tune_args.d, "structural dimension for bootstrap tuning");
    tune->add_option("--cn-mult", tune_args.cn_mult, "penalty multiplier on n^(1/4)");
    tune->add_option("--xi-points", tune_args.xi_points, "xi grid size");
    tune->add_option("--xi-min", tune_args.xi_min, "xi grid start");
    tune->add_option("--xi-max", tune_args.xi_max, "xi grid end");
    tune->add_option("--seed", tune_args.seed, "bootstrap seed");
    tune->add_option("--out-dir", tune_args.out_dir, "output directory");

    PimaArgs pima_args;
    auto* pima = app.add_subcommand("pima", "diabetes screening workflow with the shipped schema");
    pima->add_option("--input", pima_args.input, "dataset CSV");
    pima->add_option("--hw", pima_args.h_w, "auxiliary slice count");
    pima->add_option("--components", pima_args.components,
                     "components scored during tuning (0 = selected d)");
    pima->add_option("--out-dir", pima_args.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_sim(sim_args);
        if (fit->parsed()) return cmd_fit(fit_args);
        if (seldim->parsed()) return cmd_select_dim(select_args);
        if (tune->parsed()) return cmd_tune(tune_args);
        if (pima->parsed()) return cmd_pima(pima_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 2;
}
