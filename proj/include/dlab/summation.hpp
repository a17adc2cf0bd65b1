#pragma once

#include <cstddef>
#include <span>

namespace dlab {

// Pairwise (cascade) summation with a fixed split tree: the result depends
// only on the input order, never on how many workers produced the data.
template <class T, class F>
double pairwise_sum(std::span<const T> values, F&& term) {
    constexpr std::size_t kLeaf = 64;
    if (values.size() <= kLeaf) {
        double s = 0.0;
        for (const T& v : values) s += term(v);
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half), term) + pairwise_sum(values.subspan(half), term);
}

inline double pairwise_sum(std::span<const double> values) {
    return pairwise_sum(values, [](double v) { return v; });
}

}  // namespace dlab
