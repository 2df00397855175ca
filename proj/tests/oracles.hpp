#pragma once

// Independent reference computations used by the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "scandict/grid.hpp"

namespace oracle {

using scandict::Site;

// Hilbert order built by quadrant recursion: transposed copy, two translated copies,
// anti-transposed copy. Starts at (0,0) and ends at (0, 2^k - 1).
inline std::vector<Site> hilbert(int k)
{
    if (k == 0) {
        return {{0, 0}};
    }
    const std::vector<Site> h = hilbert(k - 1);
    const int s = 1 << (k - 1);
    std::vector<Site> out;
    out.reserve(h.size() * 4);
    for (Site p : h) {
        out.push_back({p.col, p.row});
    }
    for (Site p : h) {
        out.push_back({p.row + s, p.col});
    }
    for (Site p : h) {
        out.push_back({p.row + s, p.col + s});
    }
    for (Site p : h) {
        out.push_back({s - 1 - p.col, 2 * s - 1 - p.row});
    }
    return out;
}

// Count of i >= 1 with a[i-1] among the K predecessors of a[i] in b, by linear search.
inline std::size_t context_overlap(std::span<const Site> a, std::span<const Site> b, int K)
{
    std::size_t count = 0;
    for (std::size_t i = 1; i < a.size(); ++i) {
        const auto pos = static_cast<std::size_t>(std::find(b.begin(), b.end(), a[i]) - b.begin());
        const std::size_t lo = pos >= static_cast<std::size_t>(K) ? pos - static_cast<std::size_t>(K) : 0;
        for (std::size_t q = lo; q < pos; ++q) {
            if (b[q] == a[i - 1]) {
                ++count;
                break;
            }
        }
    }
    return count;
}

// Counts of each symbol per padded context (length min(i, k) history, length included).
inline std::map<std::vector<int>, std::pair<double, double>> context_counts(std::span<const int> seq, int k)
{
    std::map<std::vector<int>, std::pair<double, double>> counts;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        const std::size_t len = std::min<std::size_t>(i, static_cast<std::size_t>(k));
        std::vector<int> ctx(seq.begin() + static_cast<long>(i - len), seq.begin() + static_cast<long>(i));
        ctx.insert(ctx.begin(), static_cast<int>(len) + 10); // length marker
        auto& c = counts[ctx];
        (seq[i] ? c.second : c.first) += 1.0;
    }
    return counts;
}

// Smallest cumulative Hamming loss of any order-k decision table on a binary sequence.
inline double best_hamming_loss(std::span<const int> seq, int k)
{
    double total = 0.0;
    for (const auto& [ctx, c] : context_counts(seq, k)) {
        total += std::min(c.first, c.second);
    }
    return total;
}

// Same for squared loss with real-valued decisions: the in-context variance.
inline double best_squared_loss(std::span<const int> seq, int k)
{
    double total = 0.0;
    for (const auto& [ctx, c] : context_counts(seq, k)) {
        total += c.first * c.second / (c.first + c.second);
    }
    return total;
}

// Occurrences of s starting at positions 0..last_start.
inline std::uint64_t occurrences(std::span<const int> seq, std::span<const int> s, std::size_t last_start)
{
    std::uint64_t n = 0;
    for (std::size_t i = 0; i <= last_start && i + s.size() <= seq.size(); ++i) {
        if (std::equal(s.begin(), s.end(), seq.begin() + static_cast<long>(i))) {
            ++n;
        }
    }
    return n;
}

// Exact check of |P^{k+1}(s) - P^{j}(s)| <= (k+1-j)/(N-k) over all binary s with |s| <= j,
// using cross-multiplied integer counts.
inline bool consistency_holds(std::span<const int> seq, int k, int j)
{
    const auto N = static_cast<std::int64_t>(seq.size());
    const std::int64_t D = N - k;     // windows of length k+1
    const std::int64_t E = N - j + 1; // windows of length j
    const std::int64_t d = k + 1 - j;
    for (int len = 1; len <= j; ++len) {
        for (int bits = 0; bits < (1 << len); ++bits) {
            std::vector<int> s(static_cast<std::size_t>(len));
            for (int t = 0; t < len; ++t) {
                s[static_cast<std::size_t>(t)] = (bits >> (len - 1 - t)) & 1;
            }
            const auto a = static_cast<std::int64_t>(occurrences(seq, s, static_cast<std::size_t>(D - 1)));
            const auto b = static_cast<std::int64_t>(occurrences(seq, s, static_cast<std::size_t>(E - 1)));
            const std::int64_t lhs = a * E - b * D;
            if ((lhs < 0 ? -lhs : lhs) > d * E) {
                return false;
            }
        }
    }
    return true;
}

} // namespace oracle
