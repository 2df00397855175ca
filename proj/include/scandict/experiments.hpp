#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "scandict/fields.hpp"
#include "scandict/grid.hpp"
#include "scandict/loss.hpp"

namespace scandict {

// Experiment output. The first line is a comment naming the claim, the bound and the verdict:
//   # claim: <claim>; bound: <bound>; verdict: PASS|FAIL
// followed by a header row and the data rows.
struct CsvTable {
    std::string claim;
    std::string bound;
    bool pass = false;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add(std::vector<std::string> row);
    void write(std::ostream& out) const;
    // Column lookup by name; throws InvalidArgument.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

// Fixed-precision formatting used for every CSV cell, so output is byte-stable.
std::string fmt(double value);
std::string fmt(std::size_t value);
std::string fmt(int value);
std::string fmt(bool value);

// --- epsilon: minimax affine approximation per loss ---
struct EpsilonParams {
    double mesh = 1e-4;
};
CsvTable run_epsilon(const EpsilonParams& params);

// --- markov-example: raster vs odds-then-evens on a 1D symmetric chain ---
struct MarkovExampleParams {
    double p = 0.25;
    int length = 200000;
    std::uint64_t seed = 1;
    double tolerance = 0.01;
};
CsvTable run_markov_example(const MarkovExampleParams& params);

// --- lemma1: the shifted-expansion field under squared loss ---
struct Lemma1Params {
    int n = 32;
    int replicas = 2000;
    std::uint64_t seed = 1;
};
CsvTable run_lemma1(const Lemma1Params& params);

// --- regret: exponential weighting over a raster/Markov pool ---
enum class ArrayMix { iid, row_markov, col_markov, flip };
// Test array of the given kind; the flip kind switches from row to column structure halfway down.
DataArray mixed_array(ArrayMix kind, int n, std::uint64_t seed);

struct RegretParams {
    int n = 16;
    int m = 2;
    int experts = 4;
    int order = 1;
    int arrays = 100;
    int seeds = 100;
    std::uint64_t seed = 1;
    std::string loss = "hamming";
};
CsvTable run_regret(const RegretParams& params);

// --- regret tail: concentration of the realized loss over many seeds on one array ---
struct TailParams {
    int n = 256;
    int m = 0; // 0 -> floor(n^(1/4))
    int experts = 4;
    int order = 1;
    int seeds = 10000;
    std::uint64_t seed = 1;
    std::vector<double> targets{0.5, 0.1, 0.01}; // tail bound values; epsilon is solved from each
};
CsvTable run_regret_tail(const TailParams& params);

// --- theorem3-m2: the complete 2x2 binary pool ---
struct FullPoolParams {
    int n = 64;
    std::uint64_t seed = 1;
};
CsvTable run_theorem3_m2(const FullPoolParams& params);

// --- mixing-as: fixed block size on tiled fields of growing size ---
struct MixingParams {
    int m = 4;
    std::vector<int> sizes{32, 64, 128, 256};
    int replicas = 20;
    int experts = 4;
    int order = 1;
    std::uint64_t seed = 1;
};
CsvTable run_mixing_as(const MixingParams& params);

// --- ph-vs-raster: Hilbert scan against other scans with fitted order-k tables ---
struct HilbertParams {
    int log_side = 7;
    int order = 4;
    std::uint64_t seed = 1;
};
CsvTable run_ph_vs_raster(const HilbertParams& params);

// --- fmg-curve: rho/2 - h_b^{-1}(rho) ---
struct FmgParams {
    double mesh = 1e-3;
};
CsvTable run_fmg_curve(const FmgParams& params);

// --- sandwich: entropy/loss sandwich and scan-pair differences ---
struct SandwichParams {
    int n = 512;
    double p_mesh = 0.05;
    double markov_p = 0.25;
    int order = 2;
    std::uint64_t seed = 1;
    double slack = 0.005;      // added to epsilon for single residuals
    double pair_slack = 0.01;  // added to 2 epsilon for scan pairs
};
CsvTable run_sandwich(const SandwichParams& params);

} // namespace scandict
