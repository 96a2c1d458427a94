#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

namespace parahoric {

/// All compositions of n (ordered tuples of positive parts summing to n),
/// in lexicographic order.
inline std::vector<std::vector<int>> compositions(int n) {
    std::vector<std::vector<int>> out;
    if (n <= 0) return out;
    // Bit i of mask set means a cut after position i.
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        std::vector<int> parts;
        int run = 1;
        for (int i = 0; i < n - 1; ++i) {
            if (mask & (1u << i)) {
                parts.push_back(run);
                run = 1;
            } else {
                ++run;
            }
        }
        parts.push_back(run);
        out.push_back(std::move(parts));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// All permutations of {0, ..., n-1} in lexicographic order.
inline std::vector<std::vector<int>> permutations(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

/// Sign of a permutation given as an image vector.
inline int permutation_sign(const std::vector<int>& p) {
    int sign = 1;
    std::vector<bool> seen(p.size(), false);
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (seen[i]) continue;
        std::size_t len = 0;
        for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(p[j])) {
            seen[j] = true;
            ++len;
        }
        if (len % 2 == 0) sign = -sign;
    }
    return sign;
}

/// Block index of each coordinate for a composition.
inline std::vector<int> block_of(const std::vector<int>& comp) {
    std::vector<int> blk;
    for (std::size_t b = 0; b < comp.size(); ++b)
        for (int i = 0; i < comp[b]; ++i) blk.push_back(static_cast<int>(b));
    return blk;
}

/// Starting coordinate of each block.
inline std::vector<int> block_starts(const std::vector<int>& comp) {
    std::vector<int> s;
    int acc = 0;
    for (int c : comp) {
        s.push_back(acc);
        acc += c;
    }
    return s;
}

}  // namespace parahoric
