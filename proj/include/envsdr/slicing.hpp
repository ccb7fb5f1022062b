#pragma once

#include <vector>

#include "envsdr/numeric.hpp"

namespace envsdr {

// Slice labels are 1-based; every slice is nonempty and counts sum to n.
struct SliceAssignment {
    std::vector<int> labels;
    std::vector<int> counts;
    int H = 0;

    int n() const { return static_cast<int>(labels.size()); }
};

// One slice per distinct value, slice order = ascending value.
SliceAssignment slice_discrete(const Vector& v);

// Equal-frequency slices with boundaries at floor(n*h/H). Tied values are
// never split: a boundary landing inside a tie block moves forward past it,
// so slices can be unequal and H can shrink.
SliceAssignment slice_continuous(const Vector& v, int H);

// Cross-classification; empty (a,b) combinations are dropped and the
// remaining slices renumbered in (a,b)-ascending order.
SliceAssignment cross_slices(const SliceAssignment& a, const SliceAssignment& b);

// Throws SliceTooSmall when any slice has fewer than min_size members.
void require_min_slice_size(const SliceAssignment& s, int min_size, const char* what);

}  // namespace envsdr
