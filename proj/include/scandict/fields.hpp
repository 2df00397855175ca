#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "scandict/grid.hpp"
#include "scandict/loss.hpp"
#include "scandict/predict.hpp"
#include "scandict/rng.hpp"

namespace scandict {

enum class FieldKind { iid_bernoulli, markov_row, shift_adversary, mixing_blocks };

// one_d: a single chain of length n^2 on a 1 x n^2 array.
// rowwise: n x n, each row an independent stationary chain.
enum class ChainLayout { one_d, rowwise };

struct FieldSpec {
    FieldKind kind = FieldKind::iid_bernoulli;
    double p = 0.5; // Bernoulli parameter or flip probability
    ChainLayout layout = ChainLayout::rowwise;
    int tile = 0; // mixing_blocks tile side
    std::shared_ptr<const FieldSpec> inner;

    static FieldSpec iid(double p) { return {FieldKind::iid_bernoulli, p, ChainLayout::rowwise, 0, nullptr}; }
    static FieldSpec markov(double p, ChainLayout layout) { return {FieldKind::markov_row, p, layout, 0, nullptr}; }
    static FieldSpec shift() { return {FieldKind::shift_adversary, 0.5, ChainLayout::rowwise, 0, nullptr}; }
    static FieldSpec mixing(int tile, FieldSpec inner)
    {
        return {FieldKind::mixing_blocks, 0.5, ChainLayout::rowwise, tile,
                std::make_shared<const FieldSpec>(std::move(inner))};
    }

    // Throws InvalidArgument on bad parameters.
    void validate() const;
    std::string describe() const;
};

DataArray iid_bernoulli(int rows, int cols, double p, Rng& rng);
// Stationary symmetric binary chain(s): first symbol fair, each step flips with probability p.
DataArray markov_chain(int rows, int cols, double p, ChainLayout layout, Rng& rng);
DataArray transpose(const DataArray& array);

// Random cyclic shift of [U, b_1, ..., b_{n^2-1}] in row-major order, where b_i are the first
// binary digits of U. The digits are kept exactly; the real cell holds U rounded to a double
// strictly inside (0, 1), so it is the only cell not in {0, 1}.
struct ShiftAdversary {
    DataArray array;
    std::vector<std::uint8_t> bits; // b_1 .. b_{n^2-1}
    std::size_t shift = 0;          // J: row-major index of the real cell
    Site real_site{};
};

ShiftAdversary shift_adversary(int n, Rng& rng);

// Predicts 1/2 until it has seen the real cell; from then on every value follows from the
// shifted expansion and is predicted exactly.
class ShiftAdversaryPredictor final : public Predictor {
public:
    ShiftAdversaryPredictor(int n, std::vector<std::uint8_t> bits);
    void reset() override { located_ = false; }
    double predict(Site next) override;
    void observe(Site site, double value) override;
    PredictorPtr clone() const override { return std::make_unique<ShiftAdversaryPredictor>(*this); }

private:
    int n_;
    std::vector<std::uint8_t> bits_;
    bool located_ = false;
    std::size_t shift_ = 0;
    double real_value_ = 0.5;
};

// n x n array (1 x n^2 for one_d chains). Same spec and seed give the same array.
DataArray generate(const FieldSpec& spec, int n, Rng& rng);
DataArray generate(const FieldSpec& spec, int n, std::uint64_t seed);

struct AnalyticValue {
    double value = 0.0;
    bool total = false;       // whole-array total rather than per site
    bool lower_bound = false; // a bound rather than an attained value
};

// Known optimal losses:
//   markov_row, "raster", hamming         -> min(p, 1-p) per site
//   markov_row, "odds-then-evens", hamming -> (2p(1-p) + min(p, 1-p)) / 2 per site
//   shift_adversary, any scanner, squared  -> (n^2 + 1) / 8 total, lower bound
//   iid_bernoulli, any scanner, any loss   -> phi_l(p) per site
// Anything else throws NotTabulated.
AnalyticValue analytic_optimum(const FieldSpec& spec, const std::string& scanner, const LossFn& loss, int n);

// Entropy of the whole generated array in bits, where it has a closed form
// (iid and Markov kinds); otherwise NotTabulated.
double field_entropy_bits(const FieldSpec& spec, int n);

} // namespace scandict
