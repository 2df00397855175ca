#include "scandict/fields.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace scandict {

void FieldSpec::validate() const
{
    switch (kind) {
    case FieldKind::iid_bernoulli:
    case FieldKind::markov_row:
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InvalidArgument("field parameter p must be in [0, 1]");
        }
        break;
    case FieldKind::shift_adversary:
        break;
    case FieldKind::mixing_blocks:
        if (tile < 1) {
            throw InvalidArgument("mixing tile side must be >= 1");
        }
        if (!inner) {
            throw InvalidArgument("mixing field needs an inner spec");
        }
        if (inner->kind == FieldKind::mixing_blocks || inner->kind == FieldKind::shift_adversary ||
            (inner->kind == FieldKind::markov_row && inner->layout == ChainLayout::one_d)) {
            throw InvalidArgument("mixing tiles need an iid or row-wise Markov inner field");
        }
        inner->validate();
        break;
    }
}

std::string FieldSpec::describe() const
{
    std::ostringstream out;
    switch (kind) {
    case FieldKind::iid_bernoulli:
        out << "iid(p=" << p << ")";
        break;
    case FieldKind::markov_row:
        out << "markov(p=" << p << "," << (layout == ChainLayout::one_d ? "1d" : "rowwise") << ")";
        break;
    case FieldKind::shift_adversary:
        out << "shift-adversary";
        break;
    case FieldKind::mixing_blocks:
        out << "mixing(tile=" << tile << "," << (inner ? inner->describe() : "?") << ")";
        break;
    }
    return out.str();
}

DataArray iid_bernoulli(int rows, int cols, double p, Rng& rng)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("Bernoulli parameter outside [0, 1]");
    }
    std::vector<double> cells(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    for (double& c : cells) {
        c = rng.bernoulli(p) ? 1.0 : 0.0;
    }
    return DataArray(rows, cols, Alphabet::binary(), std::move(cells));
}

DataArray markov_chain(int rows, int cols, double p, ChainLayout layout, Rng& rng)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw InvalidArgument("flip probability outside [0, 1]");
    }
    std::vector<double> cells(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    double prev = 0.0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const bool chain_start = i == 0 || (layout == ChainLayout::rowwise && i % static_cast<std::size_t>(cols) == 0);
        if (chain_start) {
            prev = rng.bernoulli(0.5) ? 1.0 : 0.0;
        } else if (rng.bernoulli(p)) {
            prev = 1.0 - prev;
        }
        cells[i] = prev;
    }
    return DataArray(rows, cols, Alphabet::binary(), std::move(cells));
}

DataArray transpose(const DataArray& array)
{
    std::vector<double> cells(array.size());
    for (int r = 0; r < array.rows(); ++r) {
        for (int c = 0; c < array.cols(); ++c) {
            cells[static_cast<std::size_t>(c) * static_cast<std::size_t>(array.rows()) + static_cast<std::size_t>(r)] =
                array.at(r, c);
        }
    }
    return DataArray(array.cols(), array.rows(), array.alphabet(), std::move(cells));
}

ShiftAdversary shift_adversary(int n, Rng& rng)
{
    if (n < 2) {
        throw InvalidArgument("shift adversary needs n >= 2");
    }
    const std::size_t total = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    ShiftAdversary out;
    out.bits.resize(total - 1);
    for (auto& b : out.bits) {
        b = rng.bernoulli(0.5) ? 1 : 0;
    }
    // U = 0.b_1 b_2 ... b_{n^2-1} 1 truncated to double precision; the trailing 1 keeps U > 0.
    double u = 0.0;
    double scale = 0.5;
    const std::size_t used = std::min<std::size_t>(out.bits.size(), 52);
    for (std::size_t i = 0; i < used; ++i) {
        u += scale * out.bits[i];
        scale *= 0.5;
    }
    u += scale;
    u = std::min(u, std::nextafter(1.0, 0.0));
    out.shift = static_cast<std::size_t>(rng.below(total));

    std::vector<double> cells(total);
    for (std::size_t t = 0; t < total; ++t) {
        cells[(t + out.shift) % total] = t == 0 ? u : static_cast<double>(out.bits[t - 1]);
    }
    out.real_site = {static_cast<int>(out.shift / static_cast<std::size_t>(n)),
                     static_cast<int>(out.shift % static_cast<std::size_t>(n))};
    out.array = DataArray(n, n, Alphabet::real_unit(), std::move(cells));
    return out;
}

ShiftAdversaryPredictor::ShiftAdversaryPredictor(int n, std::vector<std::uint8_t> bits) : n_(n), bits_(std::move(bits))
{
    if (n < 2 || bits_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n) - 1) {
        throw InvalidArgument("expansion length must be n^2 - 1");
    }
}

double ShiftAdversaryPredictor::predict(Site next)
{
    if (!located_) {
        return 0.5;
    }
    const std::size_t total = bits_.size() + 1;
    const std::size_t idx = static_cast<std::size_t>(next.row) * static_cast<std::size_t>(n_) +
                            static_cast<std::size_t>(next.col);
    const std::size_t t = (idx + total - shift_) % total;
    return t == 0 ? real_value_ : static_cast<double>(bits_[t - 1]);
}

void ShiftAdversaryPredictor::observe(Site site, double value)
{
    if (!located_ && value != 0.0 && value != 1.0) {
        located_ = true;
        real_value_ = value;
        shift_ = static_cast<std::size_t>(site.row) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(site.col);
    }
}

DataArray generate(const FieldSpec& spec, int n, Rng& rng)
{
    spec.validate();
    if (n < 2) {
        throw InvalidArgument("field side must be >= 2");
    }
    switch (spec.kind) {
    case FieldKind::iid_bernoulli:
        return iid_bernoulli(n, n, spec.p, rng);
    case FieldKind::markov_row:
        if (spec.layout == ChainLayout::one_d) {
            return markov_chain(1, n * n, spec.p, ChainLayout::one_d, rng);
        }
        return markov_chain(n, n, spec.p, ChainLayout::rowwise, rng);
    case FieldKind::shift_adversary:
        return shift_adversary(n, rng).array;
    case FieldKind::mixing_blocks: {
        const int m = spec.tile;
        std::vector<double> cells(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
        for (int br = 0; br < n; br += m) {
            for (int bc = 0; bc < n; bc += m) {
                const DataArray patch = spec.inner->kind == FieldKind::iid_bernoulli
                                            ? iid_bernoulli(m, m, spec.inner->p, rng)
                                            : markov_chain(m, m, spec.inner->p, ChainLayout::rowwise, rng);
                for (int r = 0; r < m && br + r < n; ++r) {
                    for (int c = 0; c < m && bc + c < n; ++c) {
                        cells[static_cast<std::size_t>(br + r) * static_cast<std::size_t>(n) +
                              static_cast<std::size_t>(bc + c)] = patch.at(r, c);
                    }
                }
            }
        }
        return DataArray(n, n, Alphabet::binary(), std::move(cells));
    }
    }
    throw InvalidArgument("unknown field kind");
}

DataArray generate(const FieldSpec& spec, int n, std::uint64_t seed)
{
    Rng rng(seed);
    return generate(spec, n, rng);
}

AnalyticValue analytic_optimum(const FieldSpec& spec, const std::string& scanner, const LossFn& loss, int n)
{
    const double p = spec.p;
    if (spec.kind == FieldKind::markov_row && loss.kind() == LossKind::hamming) {
        if (scanner == "raster") {
            return {std::min(p, 1.0 - p), false, false};
        }
        if (scanner == "odds-then-evens") {
            return {(2.0 * p * (1.0 - p) + std::min(p, 1.0 - p)) / 2.0, false, false};
        }
    }
    if (spec.kind == FieldKind::shift_adversary && loss.kind() == LossKind::squared) {
        const double sites = static_cast<double>(n) * static_cast<double>(n);
        return {(sites + 1.0) / 8.0, true, true};
    }
    if (spec.kind == FieldKind::iid_bernoulli) {
        return {bayes_envelope(loss, p), false, false};
    }
    throw NotTabulated("no analytic optimum for " + spec.describe() + " with scanner '" + scanner + "' and " +
                       loss.name() + " loss");
}

double field_entropy_bits(const FieldSpec& spec, int n)
{
    const double sites = static_cast<double>(n) * static_cast<double>(n);
    switch (spec.kind) {
    case FieldKind::iid_bernoulli:
        return sites * binary_entropy_bits(spec.p);
    case FieldKind::markov_row:
        if (spec.layout == ChainLayout::one_d) {
            return 1.0 + (sites - 1.0) * binary_entropy_bits(spec.p);
        }
        return static_cast<double>(n) * (1.0 + static_cast<double>(n - 1) * binary_entropy_bits(spec.p));
    default:
        break;
    }
    throw NotTabulated("no closed-form entropy for " + spec.describe());
}

} // namespace scandict
