#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "envsdr/simulate.hpp"

using namespace envsdr;

TEST_CASE("generation is reproducible and seed-sensitive") {
    ModelSpec spec;
    SimData a = generate(spec, 99);
    SimData b = generate(spec, 99);
    CHECK((a.x - b.x).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.y - b.y).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.w - b.w).cwiseAbs().maxCoeff() == 0.0);
    SimData c = generate(spec, 100);
    CHECK((a.x - c.x).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("generated shapes and moments") {
    ModelSpec spec;
    spec.n = 2000;
    spec.p = 9;
    SimData data = generate(spec, 7);
    CHECK(data.x.rows() == 2000);
    CHECK(data.x.cols() == 9);
    CHECK(data.w.cols() == 1);
    CHECK(data.y.size() == 2000);

    const double bound = 4.0 / std::sqrt(2000.0);
    CHECK(data.x.colwise().mean().cwiseAbs().maxCoeff() < bound);
    Matrix centered = data.x.rowwise() - data.x.colwise().mean();
    Matrix cov = centered.transpose() * centered / (2000.0 - 1.0);
    CHECK((cov - Matrix::Identity(9, 9)).cwiseAbs().maxCoeff() < 0.1);
}

TEST_CASE("single-index model matches its moment structure") {
    ModelSpec spec;
    spec.id = ModelId::M1;
    spec.n = 2000;
    spec.p = 9;
    spec.a = 1.0;
    spec.b = 0.3;
    spec.sigma = 0.5;
    SimData data = generate(spec, 12345);
    TruthBases truth = truth_bases(spec);
    CHECK(truth.d_true == 1);
    CHECK(truth.d_env_true == 2);

    // y - (gamma + a*beta)' x is independent noise with variance
    // sigma^2 + a^2 (1 - b^2)
    Vector dir = truth.s_yx.col(0);
    // s_yx is the normalized (a*beta + gamma); recover the unnormalized scale
    // from the model: both beta and gamma have unit norm pieces known to the
    // generator, so regress instead
    Vector coef = data.x.householderQr().solve(data.y);
    Vector resid = data.y - data.x * coef;
    const double var_resid = resid.squaredNorm() / (data.y.size() - spec.p);
    const double expect = spec.sigma * spec.sigma + spec.a * spec.a * (1.0 - spec.b * spec.b);
    CHECK(var_resid == doctest::Approx(expect).epsilon(0.10));
    CHECK(dir.norm() == doctest::Approx(1.0));
}

TEST_CASE("auxiliary variable correlates with its planted direction") {
    ModelSpec spec;
    spec.id = ModelId::M1;
    spec.n = 4000;
    spec.p = 9;
    spec.b = 0.3;
    SimData data = generate(spec, 31415);
    // var(w) = 1 by construction: b^2 from the signal, 1-b^2 from noise
    Vector w = data.w.col(0);
    const double mean_w = w.mean();
    const double var_w = (w.array() - mean_w).square().sum() / (w.size() - 1);
    CHECK(var_w == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("truth bases for both models") {
    ModelSpec m1;
    m1.id = ModelId::M1;
    m1.a = 0.0;
    TruthBases t0 = truth_bases(m1);
    // with a = 0 the response direction is the pure regression coefficient
    ModelSpec m1a;
    m1a.id = ModelId::M1;
    m1a.a = 2.0;
    m1a.b = 0.5;
    TruthBases t1 = truth_bases(m1a);
    CHECK(t0.s_yx.cols() == 1);
    CHECK(t1.s_yx.cols() == 1);
    CHECK(trace_correlation(t0.s_yx, t1.s_yx) < 1.0);  // a shifts the direction
    CHECK(t1.s_env.cols() == 2);
    // the response direction lies inside the envelope
    Matrix q = Matrix::Identity(9, 9) - projection(t1.s_env);
    CHECK((q * t1.s_yx).cwiseAbs().maxCoeff() < 1e-12);

    ModelSpec m2;
    m2.id = ModelId::M2;
    TruthBases t2 = truth_bases(m2);
    CHECK(t2.d_true == 2);
    CHECK(t2.d_env_true == 3);
    CHECK(t2.s_yx.cols() == 2);
    CHECK(t2.s_env.cols() == 3);
    Matrix q2 = Matrix::Identity(9, 9) - projection(t2.s_env);
    CHECK((q2 * t2.s_yx).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("model parameter validation") {
    ModelSpec bad;
    bad.p = 3;  // too small to host the planted directions
    CHECK_THROWS_AS(generate(bad, 1), InvalidInput);
    ModelSpec bad2;
    bad2.id = ModelId::M2;
    bad2.p = 5;
    CHECK_THROWS_AS(generate(bad2, 1), InvalidInput);
    ModelSpec bad3;
    bad3.b = 1.5;
    CHECK_THROWS_AS(generate(bad3, 1), InvalidInput);
}

TEST_CASE("default slicing depends on the sample size") {
    KernelConfig small = default_kernel_config(150);
    CHECK(small.h_y == 10);
    CHECK(small.h_w == 2);
    CHECK(small.h_inner == 3);
    KernelConfig big = default_kernel_config(400);
    CHECK(big.h_w == 3);
}

TEST_CASE("one replicate produces sane statistics") {
    ModelSpec spec;
    spec.a = 1.0;
    spec.b = 0.1;
    SimData data = generate(spec, 2718);
    TruthBases truth = truth_bases(spec);
    KernelConfig kcfg = default_kernel_config(spec.n);
    ReplicateEstimates est =
        replicate_estimates(data, truth, kcfg, default_xi_grid(), 25, 999);
    for (double r : {est.r_hat, est.r_naive, est.r_direct}) {
        CHECK(r >= 0.0);
        CHECK(r <= 1.0);
    }
    for (double v : {est.var_hat, est.var_naive, est.var_direct}) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    CHECK(est.xi_star >= 0.1);
    CHECK(est.xi_star <= 0.9);
    CHECK(est.nu_star >= 1);

    ReplicateEstimates again =
        replicate_estimates(data, truth, kcfg, default_xi_grid(), 25, 999);
    CHECK(again.r_hat == est.r_hat);
    CHECK(again.xi_star == est.xi_star);
}

TEST_CASE("study with one replicate has zero spread") {
    StudyCell cell;
    cell.spec.a = 1.0;
    cell.spec.b = 0.1;
    StudyConfig cfg;
    cfg.replicates = 1;
    cfg.bootstraps = 10;
    cfg.seed = 4242;
    std::vector<CellStats> stats = run_study({cell}, cfg);
    REQUIRE(stats.size() == 1);
    CHECK(stats[0].sd_r_hat == 0.0);
    CHECK(stats[0].sd_r_direct == 0.0);
    double total = 0.0;
    for (double p : stats[0].p_d_hat) total += p;
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("study is deterministic and cn only affects selection") {
    StudyCell c1;
    c1.spec.a = 1.0;
    c1.spec.b = 0.1;
    c1.cn_mult = 1.0;
    StudyCell c3 = c1;
    c3.cn_mult = 3.0;
    StudyConfig cfg;
    cfg.replicates = 4;
    cfg.bootstraps = 8;
    cfg.seed = 31337;
    std::vector<CellStats> run1 = run_study({c1, c3}, cfg);
    std::vector<CellStats> run2 = run_study({c1, c3}, cfg);
    REQUIRE(run1.size() == 2);
    CHECK(run1[0].mean_r_hat == run2[0].mean_r_hat);
    CHECK(run1[0].p_d_hat == run2[0].p_d_hat);
    // the same data stream is reused across penalty multipliers, so the
    // estimation averages agree and only selection proportions move
    CHECK(run1[0].mean_r_hat == run1[1].mean_r_hat);
    CHECK(run1[0].mean_r_direct == run1[1].mean_r_direct);
}

TEST_CASE("envelope advantage grows with the auxiliary signal") {
    StudyConfig cfg;
    cfg.replicates = 40;
    cfg.bootstraps = 30;
    cfg.seed = 60601;
    cfg.compute_dimensions = false;
    std::vector<StudyCell> cells(3);
    const double as[3] = {0.0, 1.5, 3.0};
    for (int i = 0; i < 3; ++i) {
        cells[i].spec.a = as[i];
        cells[i].spec.b = 0.1;
    }
    std::vector<CellStats> stats = run_study(cells, cfg);
    double prev_gap = -1.0;
    for (const CellStats& s : stats) {
        const double gap = s.mean_r_hat - s.mean_r_direct;
        const double se = std::sqrt((s.sd_r_hat * s.sd_r_hat + s.sd_r_direct * s.sd_r_direct) /
                                    cfg.replicates);
        CHECK(gap > prev_gap - se);  // monotone within Monte Carlo noise
        prev_gap = gap;
    }
    CHECK(stats[2].mean_r_hat > stats[2].mean_r_direct);
}

TEST_CASE("study outputs are written deterministically") {
    StudyCell cell;
    cell.spec.a = 1.0;
    cell.spec.b = 0.1;
    StudyConfig cfg;
    cfg.replicates = 2;
    cfg.bootstraps = 5;
    cfg.seed = 11;
    std::vector<CellStats> stats = run_study({cell}, cfg);

    auto slurp = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    write_study_csv(stats, "_study_test.csv");
    std::string first = slurp("_study_test.csv");
    write_study_csv(stats, "_study_test.csv");
    std::string second = slurp("_study_test.csv");
    CHECK(first == second);
    CHECK(first.find("mean_r_hat") != std::string::npos);
    CHECK(first.find("p_d_hat_1") != std::string::npos);

    write_study_metadata({cell}, cfg, "_study_test.json");
    std::string meta = slurp("_study_test.json");
    CHECK(meta.find("mt19937_64/box-muller") != std::string::npos);
    CHECK(meta.find("\"seed\"") != std::string::npos);
    std::remove("_study_test.csv");
    std::remove("_study_test.json");
}
