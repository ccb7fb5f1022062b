#include "envsdr/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "envsdr/estimator.hpp"

namespace envsdr {

int bic_rank(const Vector& eigenvalues, double n, double c_n, int k_max, BicPenalty penalty) {
    const int p = static_cast<int>(eigenvalues.size());
    if (p == 0) throw DegenerateSpectrum("bic_rank: empty spectrum");
    if (n <= 0.0) throw InvalidInput("bic_rank: n must be positive");
    if (k_max <= 0 || k_max > p) k_max = p;

    Vector lam = eigenvalues.cwiseMax(0.0);
    double total = 0.0;
    for (int j = 0; j < p; ++j) total += std::log(lam[j] + 1.0) - lam[j];
    if (total == 0.0) throw DegenerateSpectrum("bic_rank: all eigenvalues zero");

    const double pd = static_cast<double>(p);
    double partial = 0.0;
    double best = -std::numeric_limits<double>::infinity();
    int best_k = 1;
    for (int k = 1; k <= k_max; ++k) {
        partial += std::log(lam[k - 1] + 1.0) - lam[k - 1];
        const double kd = static_cast<double>(k);
        const double pen = penalty == BicPenalty::AMBIENT ? pd * kd - kd * (kd - 1.0) / 2.0
                                                          : kd * (kd + 1.0) / 2.0;
        const double g = partial / total - (c_n / n) * pen;
        if (g > best) {
            best = g;
            best_k = k;
        }
    }
    return best_k;
}

std::vector<double> default_xi_grid() {
    std::vector<double> grid(41);
    for (int i = 0; i < 41; ++i) grid[static_cast<size_t>(i)] = 0.10 + 0.02 * i;
    return grid;
}

int median_lower(std::vector<int> values) {
    if (values.empty()) throw InvalidInput("median_lower: empty input");
    std::sort(values.begin(), values.end());
    return values[(values.size() - 1) / 2];
}

namespace {

double effective_scale(const SelectOptions& opt, int n) {
    return opt.env_scale > 0.0 ? opt.env_scale : static_cast<double>(n) / 2.0;
}

std::vector<double> criterion_curve(const Vector& lam, double n, double c_n, BicPenalty pen) {
    const int p = static_cast<int>(lam.size());
    std::vector<double> g(static_cast<size_t>(p));
    Vector l = lam.cwiseMax(0.0);
    double total = 0.0;
    for (int j = 0; j < p; ++j) total += std::log(l[j] + 1.0) - l[j];
    double partial = 0.0;
    for (int k = 1; k <= p; ++k) {
        partial += std::log(l[k - 1] + 1.0) - l[k - 1];
        const double kd = static_cast<double>(k);
        const double penv = pen == BicPenalty::AMBIENT
                                ? static_cast<double>(p) * kd - kd * (kd - 1.0) / 2.0
                                : kd * (kd + 1.0) / 2.0;
        g[static_cast<size_t>(k - 1)] = (total == 0.0 ? 0.0 : partial / total) - (c_n / n) * penv;
    }
    return g;
}

}  // namespace

DimSelection select_d_env(const KernelBuilder& builder, const std::vector<double>& xi_grid,
                          int n, double c_n, const SelectOptions& opt) {
    if (xi_grid.empty()) throw InvalidInput("select_d_env: empty xi grid");
    const double scale = effective_scale(opt, n);

    DimSelection out;
    out.xi_grid = xi_grid;
    for (double xi : xi_grid) {
        KernelMatrix ke = builder(xi);
        Vector lam = scale * sym_eigen(ke.mat).values;
        out.d_env_by_xi.push_back(bic_rank(lam, n, c_n, -1, opt.env_penalty));
        out.env_criterion.push_back(criterion_curve(lam, n, c_n, opt.env_penalty));
    }
    out.d_env = median_lower(out.d_env_by_xi);
    return out;
}

DimSelection select_d(const KernelMatrix& k_yz, const KernelBuilder& builder,
                      const std::vector<double>& xi_grid, int n, double c_n,
                      const SelectOptions& opt) {
    if (xi_grid.empty()) throw InvalidInput("select_d: empty xi grid");
    const double scale = effective_scale(opt, n);

    DimSelection out;
    out.xi_grid = xi_grid;
    for (double xi : xi_grid) {
        KernelMatrix ke = builder(xi);
        Vector lam_env = scale * sym_eigen(ke.mat).values;
        const int nu = bic_rank(lam_env, n, c_n, -1, opt.env_penalty);
        out.d_env_by_xi.push_back(nu);
        out.env_criterion.push_back(criterion_curve(lam_env, n, c_n, opt.env_penalty));

        SubspaceBasis benv = envelope_basis(ke, nu);
        Matrix proj = projection(benv.columns);
        Vector lam_proj = scale * sym_eigen(proj * k_yz.mat * proj).values;
        out.d_by_xi.push_back(bic_rank(lam_proj, n, c_n, nu, opt.stage2_penalty));
        out.d_criterion.push_back(criterion_curve(lam_proj, n, c_n, opt.stage2_penalty));
    }
    out.d_env = median_lower(out.d_env_by_xi);
    out.d = median_lower(out.d_by_xi);
    return out;
}

int select_d_direct(const KernelMatrix& k_yz, int n, double c_n, int h_y, double scale) {
    if (h_y < 1) throw InvalidInput("select_d_direct: h_y must be >= 1");
    const double s = scale > 0.0 ? scale : static_cast<double>(n) / static_cast<double>(h_y);
    Vector lam = s * sym_eigen(k_yz.mat).values;
    return bic_rank(lam, n, c_n, -1, BicPenalty::TRIANGULAR);
}

}  // namespace envsdr
