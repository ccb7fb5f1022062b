#include "envsdr/slicing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace envsdr {

namespace {

SliceAssignment finalize(std::vector<int> raw_labels) {
    // compress to 1..H preserving label order, drop unused labels
    std::map<int, int> remap;
    for (int lab : raw_labels) remap.emplace(lab, 0);
    int next = 1;
    for (auto& kv : remap) kv.second = next++;

    SliceAssignment out;
    out.H = next - 1;
    out.labels.resize(raw_labels.size());
    out.counts.assign(static_cast<size_t>(out.H), 0);
    for (size_t i = 0; i < raw_labels.size(); ++i) {
        const int lab = remap[raw_labels[i]];
        out.labels[i] = lab;
        out.counts[static_cast<size_t>(lab - 1)] += 1;
    }
    return out;
}

}  // namespace

SliceAssignment slice_discrete(const Vector& v) {
    if (v.size() == 0) throw EmptyData("slice_discrete: empty input");
    if (!v.allFinite()) throw InvalidInput("slice_discrete: non-finite values");
    std::map<double, int> levels;
    for (Eigen::Index i = 0; i < v.size(); ++i) levels.emplace(v[i], 0);
    int next = 1;
    for (auto& kv : levels) kv.second = next++;

    SliceAssignment out;
    out.H = next - 1;
    out.labels.resize(static_cast<size_t>(v.size()));
    out.counts.assign(static_cast<size_t>(out.H), 0);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const int lab = levels[v[i]];
        out.labels[static_cast<size_t>(i)] = lab;
        out.counts[static_cast<size_t>(lab - 1)] += 1;
    }
    return out;
}

SliceAssignment slice_continuous(const Vector& v, int H) {
    const int n = static_cast<int>(v.size());
    if (H < 1) throw InvalidInput("slice_continuous: H must be >= 1");
    if (n == 0) throw EmptyData("slice_continuous: empty input");
    if (H > n) throw TooManySlices("slice_continuous: H=" + std::to_string(H) +
                                   " exceeds n=" + std::to_string(n));
    if (!v.allFinite()) throw InvalidInput("slice_continuous: non-finite values");

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return v[a] < v[b]; });

    std::vector<int> raw(static_cast<size_t>(n), 0);
    int pos = 0;
    for (int h = 1; h <= H; ++h) {
        // clamp: a tie block may already have swallowed this boundary
        int stop = (h == H) ? n : std::max((n * h) / H, pos);
        // never split a tie block: advance the boundary past equal values
        while (stop > pos && stop < n && v[order[static_cast<size_t>(stop)]] ==
                                             v[order[static_cast<size_t>(stop - 1)]])
            ++stop;
        for (int r = pos; r < stop; ++r) raw[static_cast<size_t>(order[static_cast<size_t>(r)])] = h;
        pos = stop;
        if (pos >= n) break;
    }
    return finalize(std::move(raw));
}

SliceAssignment cross_slices(const SliceAssignment& a, const SliceAssignment& b) {
    if (a.n() != b.n()) throw InvalidInput("cross_slices: length mismatch");
    if (a.n() == 0) throw EmptyData("cross_slices: empty input");
    std::vector<int> raw(static_cast<size_t>(a.n()));
    for (int i = 0; i < a.n(); ++i)
        raw[static_cast<size_t>(i)] =
            (a.labels[static_cast<size_t>(i)] - 1) * b.H + b.labels[static_cast<size_t>(i)];
    return finalize(std::move(raw));
}

void require_min_slice_size(const SliceAssignment& s, int min_size, const char* what) {
    for (size_t h = 0; h < s.counts.size(); ++h) {
        if (s.counts[h] < min_size)
            throw SliceTooSmall(std::string(what) + ": slice " + std::to_string(h + 1) +
                                " has " + std::to_string(s.counts[h]) + " member(s), needs " +
                                std::to_string(min_size));
    }
}

}  // namespace envsdr
