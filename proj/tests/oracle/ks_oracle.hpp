#pragma once

// Brute-force two-sample KS distance: compares the empirical CDFs at every
// sample value, from the right and from the left.

#include <algorithm>
#include <cmath>
#include <vector>

namespace oracle {

inline double ecdf_count(const std::vector<double>& s, double x, bool inclusive) {
    double n = 0.0;
    for (double v : s) {
        if (inclusive ? v <= x : v < x) {
            n += 1.0;
        }
    }
    return n / static_cast<double>(s.size());
}

inline double ks_bruteforce(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> points = a;
    points.insert(points.end(), b.begin(), b.end());
    double best = 0.0;
    for (double x : points) {
        best = std::max(best, std::abs(ecdf_count(a, x, true) - ecdf_count(b, x, true)));
        best = std::max(best, std::abs(ecdf_count(a, x, false) - ecdf_count(b, x, false)));
    }
    return best;
}

}  // namespace oracle
