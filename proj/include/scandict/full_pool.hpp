#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "scandict/grid.hpp"

namespace scandict {

// Every scandictor for a 2x2 binary block with predictions in {0, 1} under Hamming loss.
// A scanner is a decision tree: the first site, the second site for each first value, and the
// third site for each pair of values (the last site is forced): 4 * 3^2 * 2^4 = 576 scanners.
// A predictor assigns a bit to each of the 15 value histories of length 0..3.
class FullPool2x2 {
public:
    static constexpr int kSites = 4;
    static constexpr int kNodes = 15;
    static constexpr std::size_t kScanners = 576;

    struct Step {
        int site;  // row-major index inside the block
        int node;  // value-history node seen before this step
        int value; // value found at the site
    };

    // Path of scanner s on a block whose row-major values are the bits of `pattern` (bit i = site i).
    static std::array<Step, kSites> path(std::size_t scanner, unsigned pattern);

    // ln(576) + 15 ln 2.
    static double log_lambda();

    // Hamming loss of expert (scanner, predictor bits) on one block pattern.
    static int block_loss(std::size_t scanner, std::uint32_t predictor, unsigned pattern);
};

// Row-major 4-bit patterns of the full 2x2 blocks of a binary n x n array, boustrophedon order.
std::vector<unsigned> block_patterns_2x2(const DataArray& array);

struct FullPoolRun {
    double eta = 0.0;
    double expected_loss = 0.0; // sum over blocks of E_{P_i}[expert loss]
    double alg_loss = 0.0;      // realized loss of the drawn experts
    double min_loss = 0.0;      // best expert in hindsight
    double bound = 0.0;         // regret bound for this pool
    std::size_t best_scanner = 0;
};

// Exponential weighting over the pool restricted to `scanners` (all 576 when empty) times all
// 2^15 predictors. The weights factor over the 15 history nodes, so the run costs
// O(|scanners| * 15) per block instead of O(lambda).
FullPoolRun run_full_pool(std::span<const unsigned> patterns, int n, double eta, std::uint64_t seed,
                          std::span<const std::size_t> scanners = {});

} // namespace scandict
