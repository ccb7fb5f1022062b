// Python face of the toolkit: thin functional wrappers over the C++ core.
// Matrices cross the boundary as numpy arrays via pybind11's Eigen caster.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "envsdr/dataset.hpp"
#include "envsdr/dimension.hpp"
#include "envsdr/estimator.hpp"
#include "envsdr/simulate.hpp"
#include "envsdr/tuning.hpp"

namespace py = pybind11;
using namespace envsdr;

namespace {

KernelKind parse_y_kernel(const std::string& name) {
    if (name == "sir") return KernelKind::SIR;
    if (name == "save") return KernelKind::SAVE;
    throw InvalidInput("y_kernel must be 'sir' or 'save', got '" + name + "'");
}

BicPenalty parse_penalty(const std::string& name) {
    if (name == "ambient") return BicPenalty::AMBIENT;
    if (name == "triangular") return BicPenalty::TRIANGULAR;
    throw InvalidInput("penalty must be 'ambient' or 'triangular', got '" + name + "'");
}

ModelId parse_model(const std::string& name) {
    if (name == "m1") return ModelId::M1;
    if (name == "m2") return ModelId::M2;
    throw InvalidInput("model must be 'm1' or 'm2', got '" + name + "'");
}

KernelConfig make_config(const std::string& y_kernel, int h_y, int h_w, int h_inner,
                         bool normalize) {
    KernelConfig cfg;
    cfg.y_kernel = parse_y_kernel(y_kernel);
    cfg.h_y = h_y;
    cfg.h_w = h_w;
    cfg.h_inner = h_inner;
    cfg.normalize_hybrid = normalize;
    return cfg;
}

Matrix as_w(const std::optional<Matrix>& w, Eigen::Index n) {
    if (!w) return Matrix(n, 0);
    return *w;
}

py::dict estimate_dict(const EstimateResult& est) {
    py::dict out;
    out["basis_z"] = est.basis_z.columns;
    out["basis_x"] = est.basis_x;
    out["eigenvalues"] = est.eigenvalues_used;
    return out;
}

std::vector<double> grid_or_default(const std::optional<std::vector<double>>& grid) {
    return grid ? *grid : default_xi_grid();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "two-stage envelope dimension reduction with an auxiliary variable";

    py::register_exception<Error>(m, "ToolkitError");

    m.def("standardize",
          [](const Matrix& x) {
              StandardizedData sd = standardize(x);
              py::dict out;
              out["z"] = sd.z;
              out["mu"] = sd.mu;
              out["sigma"] = sd.sigma;
              out["sigma_inv_sqrt"] = sd.sigma_inv_sqrt;
              return out;
          },
          py::arg("x"), "center and whiten rows; covariance divisor is n-1");

    m.def("trace_correlation",
          [](const Matrix& b1, const Matrix& b2) { return trace_correlation(b1, b2); },
          py::arg("basis1"), py::arg("basis2"),
          "subspace agreement in [0, 1] between two orthonormal bases of equal rank");

    m.def("bic_rank",
          [](const Vector& eigenvalues, double n, double c_n, int k_max,
             const std::string& penalty) {
              return bic_rank(eigenvalues, n, c_n, k_max, parse_penalty(penalty));
          },
          py::arg("eigenvalues"), py::arg("n"), py::arg("c_n"), py::arg("k_max") = -1,
          py::arg("penalty") = "ambient",
          "penalized eigenvalue-share rank; scale-sensitive on purpose");

    m.def("kernels",
          [](const Vector& y, const Matrix& x, const std::optional<Matrix>& w,
             const std::string& y_kernel, int h_y, int h_w, int h_inner) {
              KernelConfig cfg = make_config(y_kernel, h_y, h_w, h_inner, false);
              KernelSet ks = build_kernels(y, x, as_w(w, x.rows()), cfg);
              py::dict out;
              out["z"] = ks.std_data.z;
              out["sigma_inv_sqrt"] = ks.std_data.sigma_inv_sqrt;
              out["k_y"] = ks.k_y.mat;
              if (ks.k_w.mat.size()) {
                  out["k_w"] = ks.k_w.mat;
                  out["k_partial"] = ks.k_partial.mat;
                  out["k_joint"] = ks.k_joint.mat;
              }
              return out;
          },
          py::arg("y"), py::arg("x"), py::arg("w") = py::none(), py::arg("y_kernel") = "sir",
          py::arg("h_y") = 10, py::arg("h_w") = 3, py::arg("h_inner") = 3,
          "all slice kernels for a dataset; auxiliary entries only when w is given");

    m.def("hybrid_kernel",
          [](const Matrix& k_w, const Matrix& k_partial, double xi, bool normalize) {
              return hybrid_kernel({k_w, KernelKind::W_SIR}, {k_partial, KernelKind::PSIR}, xi,
                                   normalize)
                  .mat;
          },
          py::arg("k_w"), py::arg("k_partial"), py::arg("xi"), py::arg("normalize") = false,
          "xi-weighted combination of the auxiliary and within-slice kernels");

    m.def("direct_estimate",
          [](const Matrix& k, int d, const std::optional<Matrix>& sigma_inv_sqrt) {
              KernelMatrix km{k, KernelKind::SIR};
              EstimateResult est = sigma_inv_sqrt
                                       ? direct_estimate(km, d, &*sigma_inv_sqrt)
                                       : direct_estimate(km, d);
              return estimate_dict(est);
          },
          py::arg("k"), py::arg("d"), py::arg("sigma_inv_sqrt") = py::none(),
          "leading-eigenvector basis of a response kernel");

    m.def("envelope_basis",
          [](const Matrix& k_env, int nu) {
              return envelope_basis({k_env, KernelKind::HYBRID}, nu).columns;
          },
          py::arg("k_env"), py::arg("nu"), "leading nu eigenvectors of an envelope kernel");

    m.def("two_stage_estimate",
          [](const Matrix& k, const Matrix& b_env, int d,
             const std::optional<Matrix>& sigma_inv_sqrt) {
              KernelMatrix km{k, KernelKind::SIR};
              SubspaceBasis env{b_env, Scale::Z};
              EstimateResult est = sigma_inv_sqrt
                                       ? two_stage_estimate(km, env, d, &*sigma_inv_sqrt)
                                       : two_stage_estimate(km, env, d);
              return estimate_dict(est);
          },
          py::arg("k"), py::arg("b_env"), py::arg("d"), py::arg("sigma_inv_sqrt") = py::none(),
          "response kernel projected into the envelope, then leading eigenvectors");

    m.def("select_dimensions",
          [](const Vector& y, const Matrix& x, const Matrix& w, const std::string& y_kernel,
             int h_y, int h_w, int h_inner, double c_n_mult,
             const std::optional<std::vector<double>>& xi_grid) {
              KernelConfig cfg = make_config(y_kernel, h_y, h_w, h_inner, false);
              KernelSet ks = build_kernels(y, x, w, cfg);
              const int n = static_cast<int>(y.size());
              const double cn = c_n_mult * std::pow(static_cast<double>(n), 0.25);
              std::vector<double> grid = grid_or_default(xi_grid);
              DimSelection sel = select_d(
                  ks.k_y, [&](double xi) { return hybrid_from_set(ks, xi, cfg); }, grid, n, cn);
              const int d_direct = select_d_direct(ks.k_y, n, cn, ks.y_slices.H);
              py::dict out;
              out["d"] = sel.d;
              out["d_env"] = sel.d_env;
              out["d_direct"] = d_direct;
              out["xi_grid"] = sel.xi_grid;
              out["d_by_xi"] = sel.d_by_xi;
              out["d_env_by_xi"] = sel.d_env_by_xi;
              return out;
          },
          py::arg("y"), py::arg("x"), py::arg("w"), py::arg("y_kernel") = "sir",
          py::arg("h_y") = 10, py::arg("h_w") = 3, py::arg("h_inner") = 3,
          py::arg("c_n_mult") = 1.0, py::arg("xi_grid") = py::none(),
          "structural and envelope ranks: per-grid-point selections and their lower medians");

    m.def("qda_loo_accuracy",
          [](const Matrix& features, const std::vector<int>& labels, bool auto_ridge) {
              return qda_loo_accuracy(features, labels, auto_ridge);
          },
          py::arg("features"), py::arg("labels"), py::arg("auto_ridge") = true,
          "leave-one-out accuracy of class-conditional Gaussians");

    m.def("tune_by_loo",
          [](const Vector& y, const Matrix& x, const Matrix& w, const std::vector<int>& nu_range,
             const std::optional<std::vector<double>>& xi_grid, int components,
             const std::string& y_kernel, int h_y, int h_w, int h_inner) {
              KernelConfig cfg = make_config(y_kernel, h_y, h_w, h_inner, false);
              TuningReport rep =
                  tune_by_loo(y, x, w, cfg, nu_range, grid_or_default(xi_grid), components);
              py::dict out;
              out["nu"] = rep.nu;
              out["xi"] = rep.xi;
              py::list cands;
              for (const auto& c : rep.candidates)
                  cands.append(py::make_tuple(c.nu, c.xi, c.score));
              out["candidates"] = cands;
              return out;
          },
          py::arg("y"), py::arg("x"), py::arg("w"), py::arg("nu_range"),
          py::arg("xi_grid") = py::none(), py::arg("components") = 0,
          py::arg("y_kernel") = "sir", py::arg("h_y") = 10, py::arg("h_w") = 3,
          py::arg("h_inner") = 3,
          "pick (nu, xi) by leave-one-out accuracy of the reduced scores");

    m.def("tune_by_bootstrap",
          [](const Vector& y, const Matrix& x, const Matrix& w, const std::vector<int>& nu_range,
             const std::optional<std::vector<double>>& xi_grid, int d, int m, std::uint64_t seed,
             const std::string& y_kernel, int h_y, int h_w, int h_inner) {
              KernelConfig cfg = make_config(y_kernel, h_y, h_w, h_inner, false);
              TuningReport rep = tune_by_bootstrap(y, x, w, cfg, nu_range,
                                                   grid_or_default(xi_grid), d, m, seed);
              py::dict out;
              out["nu"] = rep.nu;
              out["xi"] = rep.xi;
              py::list cands;
              for (const auto& c : rep.candidates)
                  cands.append(py::make_tuple(c.nu, c.xi, c.score));
              out["candidates"] = cands;
              return out;
          },
          py::arg("y"), py::arg("x"), py::arg("w"), py::arg("nu_range"),
          py::arg("xi_grid") = py::none(), py::arg("d") = 1, py::arg("m") = 100,
          py::arg("seed") = 20240601, py::arg("y_kernel") = "sir", py::arg("h_y") = 10,
          py::arg("h_w") = 3, py::arg("h_inner") = 3,
          "pick (nu, xi) by resampling stability of the two-stage basis");

    m.def("generate",
          [](const std::string& model, int n, int p, double a, double b, double sigma,
             std::uint64_t seed) {
              ModelSpec spec;
              spec.id = parse_model(model);
              spec.n = n;
              spec.p = p;
              spec.a = a;
              spec.b = b;
              spec.sigma = sigma;
              SimData data = generate(spec, seed);
              return py::make_tuple(data.y, data.x, data.w);
          },
          py::arg("model") = "m1", py::arg("n") = 150, py::arg("p") = 9, py::arg("a") = 1.0,
          py::arg("b") = 0.1, py::arg("sigma") = 0.5, py::arg("seed") = 0,
          "draw (y, x, w) from one of the two study models");

    m.def("truth_bases",
          [](const std::string& model, int p, double a, double b) {
              ModelSpec spec;
              spec.id = parse_model(model);
              spec.p = p;
              spec.a = a;
              spec.b = b;
              TruthBases t = truth_bases(spec);
              py::dict out;
              out["s_yx"] = t.s_yx;
              out["s_env"] = t.s_env;
              out["d"] = t.d_true;
              out["d_env"] = t.d_env_true;
              return out;
          },
          py::arg("model") = "m1", py::arg("p") = 9, py::arg("a") = 1.0, py::arg("b") = 0.1,
          "population bases the estimators are judged against");

    m.def("read_csv",
          [](const std::string& path, const std::string& y_col,
             const std::vector<std::string>& x_cols, const std::vector<std::string>& w_cols,
             const std::vector<std::string>& zero_missing) {
              Schema schema;
              schema.columns.push_back({y_col, Role::RESPONSE, false});
              auto is_zero_missing = [&](const std::string& c) {
                  return std::find(zero_missing.begin(), zero_missing.end(), c) !=
                         zero_missing.end();
              };
              for (const auto& c : x_cols)
                  schema.columns.push_back({c, Role::COVARIATE, is_zero_missing(c)});
              for (const auto& c : w_cols)
                  schema.columns.push_back({c, Role::AUXILIARY, is_zero_missing(c)});
              DataSet ds = ingest_csv(path, schema);
              py::dict out;
              out["y"] = ds.y;
              out["x"] = ds.x;
              out["w"] = ds.w;
              out["n"] = ds.n;
              out["dropped_rows"] = ds.dropped_rows;
              return out;
          },
          py::arg("path"), py::arg("y_col"), py::arg("x_cols"),
          py::arg("w_cols") = std::vector<std::string>{},
          py::arg("zero_missing") = std::vector<std::string>{},
          "column-schema CSV reader with missing-row dropping");
}
