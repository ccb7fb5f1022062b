#pragma once

#include <functional>
#include <vector>

#include "envsdr/kernels.hpp"

namespace envsdr {

// Penalty term per candidate rank k in the BIC-type criterion.
//   AMBIENT:    (c_n/n) * (p*k - k(k-1)/2), decreasing increments in k
//   TRIANGULAR: (c_n/n) * k(k+1)/2,          increasing increments in k
enum class BicPenalty { AMBIENT, TRIANGULAR };

// argmax over k = 1..k_max of
//   [sum_{j<=k} (ln(l_j+1) - l_j)] / [sum_{j<=p} (ln(l_j+1) - l_j)] - penalty(k)
// on the descending eigenvalue vector (negatives clamped to 0). Ties take the
// smallest k; k_max <= 0 means no cap. The criterion is scale-sensitive by
// design: callers choose the eigenvalue scale.
int bic_rank(const Vector& eigenvalues, double n, double c_n, int k_max = -1,
             BicPenalty penalty = BicPenalty::AMBIENT);

struct SelectOptions {
    // multiplier applied to kernel eigenvalues before bic_rank; <= 0 means n/2
    double env_scale = -1.0;
    BicPenalty env_penalty = BicPenalty::TRIANGULAR;   // for the envelope rank
    BicPenalty stage2_penalty = BicPenalty::AMBIENT;   // for the restricted second stage
};

struct DimSelection {
    std::vector<double> xi_grid;
    std::vector<int> d_env_by_xi;
    std::vector<int> d_by_xi;                        // empty when only the envelope rank is selected
    int d_env = 0;
    int d = 0;                                       // lower medians over the grid
    std::vector<std::vector<double>> env_criterion;  // per xi: criterion value at k = 1..p
    std::vector<std::vector<double>> d_criterion;
};

using KernelBuilder = std::function<KernelMatrix(double xi)>;

// default grid: 41 equispaced points 0.10, 0.12, ..., 0.90
std::vector<double> default_xi_grid();

// lower median: order statistic ceil(m/2)
int median_lower(std::vector<int> values);

// Envelope rank per xi, then the lower median across the grid.
DimSelection select_d_env(const KernelBuilder& builder, const std::vector<double>& xi_grid,
                          int n, double c_n, const SelectOptions& opt = {});

// Per xi: envelope basis at the selected envelope rank, response kernel
// projected into it, restricted rank selection (k capped at the envelope
// rank); then the lower median across the grid.
DimSelection select_d(const KernelMatrix& k_yz, const KernelBuilder& builder,
                      const std::vector<double>& xi_grid, int n, double c_n,
                      const SelectOptions& opt = {});

// Unrestricted rank of the response kernel itself. scale <= 0 means n/H with
// H the response slice count (the between-slice scatter normalization).
int select_d_direct(const KernelMatrix& k_yz, int n, double c_n, int h_y, double scale = -1.0);

}  // namespace envsdr
