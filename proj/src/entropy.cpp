#include "scandict/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace scandict {

namespace {

constexpr std::size_t kMaxStrings = std::size_t{1} << 26;

int to_symbol(double v, int q)
{
    const int s = static_cast<int>(v);
    if (static_cast<double>(s) != v || s < 0 || s >= q) {
        throw InvalidArgument("value is not a symbol of the alphabet");
    }
    return s;
}

std::size_t power(int base, int exp)
{
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) {
        r *= static_cast<std::size_t>(base);
        if (r > kMaxStrings) {
            throw InvalidArgument("empirical model too large");
        }
    }
    return r;
}

std::uint64_t fnv1a(std::span<const double> seq)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (double v : seq) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof bits);
        for (int i = 0; i < 8; ++i) {
            h ^= (bits >> (8 * i)) & 0xff;
            h *= 1099511628211ULL;
        }
    }
    return h ^ seq.size();
}

} // namespace

EmpiricalModel::EmpiricalModel(std::span<const double> sequence, int k, int symbols)
    : k_(k), q_(symbols), length_(sequence.size())
{
    if (k < 0 || symbols < 2) {
        throw InvalidArgument("empirical model needs k >= 0 and at least 2 symbols");
    }
    if (sequence.size() <= static_cast<std::size_t>(k)) {
        throw InvalidArgument("sequence must be longer than k");
    }
    const std::size_t total = power(q_, k_ + 1);
    counts_.assign(total, 0);
    windows_ = sequence.size() - static_cast<std::size_t>(k);
    hash_ = fnv1a(sequence);

    std::vector<int> sym(sequence.size());
    for (std::size_t i = 0; i < sequence.size(); ++i) {
        sym[i] = to_symbol(sequence[i], q_);
    }
    std::size_t code = 0;
    for (int i = 0; i < k_; ++i) {
        code = code * static_cast<std::size_t>(q_) + static_cast<std::size_t>(sym[static_cast<std::size_t>(i)]);
    }
    const std::size_t window_span = total / static_cast<std::size_t>(q_);
    for (std::size_t i = static_cast<std::size_t>(k_); i < sym.size(); ++i) {
        code = (code % window_span) * static_cast<std::size_t>(q_) + static_cast<std::size_t>(sym[i]);
        ++counts_[code];
    }
}

std::uint64_t EmpiricalModel::count(std::span<const int> prefix) const
{
    if (prefix.size() > static_cast<std::size_t>(k_) + 1) {
        throw InvalidArgument("string longer than the model order");
    }
    std::size_t value = 0;
    for (int s : prefix) {
        if (s < 0 || s >= q_) {
            throw InvalidArgument("symbol out of range");
        }
        value = value * static_cast<std::size_t>(q_) + static_cast<std::size_t>(s);
    }
    const std::size_t width = power(q_, k_ + 1 - static_cast<int>(prefix.size()));
    std::uint64_t total = 0;
    for (std::size_t i = value * width; i < (value + 1) * width; ++i) {
        total += counts_[i];
    }
    return total;
}

double EmpiricalModel::prob(std::span<const int> prefix) const
{
    return static_cast<double>(count(prefix)) / static_cast<double>(windows_);
}

double EmpiricalModel::conditional(std::span<const int> context, int x) const
{
    if (context.size() != static_cast<std::size_t>(k_)) {
        throw InvalidArgument("conditional needs a context of length k");
    }
    const std::uint64_t denom = count(context);
    if (denom == 0) {
        return 1.0 / static_cast<double>(q_);
    }
    std::vector<int> full(context.begin(), context.end());
    full.push_back(x);
    return static_cast<double>(count(full)) / static_cast<double>(denom);
}

EmpiricalModel empirical_dist(std::span<const double> sequence, int k, int symbols)
{
    return EmpiricalModel(sequence, k, symbols);
}

double cond_entropy(const EmpiricalModel& model)
{
    const auto q = static_cast<std::size_t>(model.symbols());
    const auto c = model.counts();
    const double windows = static_cast<double>(model.windows());
    double h = 0.0;
    for (std::size_t ctx = 0; ctx * q < c.size(); ++ctx) {
        std::uint64_t total = 0;
        for (std::size_t x = 0; x < q; ++x) {
            total += c[ctx * q + x];
        }
        if (total == 0) {
            continue;
        }
        for (std::size_t x = 0; x < q; ++x) {
            const std::uint64_t n = c[ctx * q + x];
            if (n > 0) {
                const double p = static_cast<double>(n) / static_cast<double>(total);
                h -= (static_cast<double>(n) / windows) * std::log(p);
            }
        }
    }
    return std::max(0.0, h);
}

double cond_entropy_bits(const EmpiricalModel& model) { return cond_entropy(model) / std::log(2.0); }

ConsistencyGap consistency_gap(const EmpiricalModel& high, const EmpiricalModel& low)
{
    if (high.source_hash() != low.source_hash() || high.sequence_length() != low.sequence_length() ||
        high.symbols() != low.symbols()) {
        throw DomainMismatch("models were built from different sequences");
    }
    const int k = high.order();
    const int j = low.order() + 1;
    if (j > k + 1) {
        throw InvalidArgument("low-order model must not exceed the high-order one");
    }
    if (high.sequence_length() >= (std::uint64_t{1} << 31)) {
        throw InvalidArgument("sequence too long for the exact consistency check");
    }
    ConsistencyGap out;
    const std::uint64_t D = high.windows();
    const std::uint64_t E = low.windows();
    const auto d = static_cast<std::uint64_t>(k + 1 - j);
    out.bound = static_cast<double>(d) / static_cast<double>(D);

    const int q = high.symbols();
    std::vector<int> s;
    for (int len = 1; len <= j; ++len) {
        s.assign(static_cast<std::size_t>(len), 0);
        while (true) {
            const std::uint64_t a = high.count(s);
            const std::uint64_t b = low.count(s);
            const double gap = std::abs(static_cast<double>(a) / static_cast<double>(D) -
                                        static_cast<double>(b) / static_cast<double>(E));
            out.max_gap = std::max(out.max_gap, gap);
            // |a/D - b/E| <= d/D  <=>  |a E - b D| <= d E, all in exact integers.
            const std::uint64_t lhs_a = a * E;
            const std::uint64_t lhs_b = b * D;
            const std::uint64_t diff = lhs_a > lhs_b ? lhs_a - lhs_b : lhs_b - lhs_a;
            if (diff > d * E) {
                out.holds = false;
            }
            int pos = len - 1;
            while (pos >= 0 && ++s[static_cast<std::size_t>(pos)] == q) {
                s[static_cast<std::size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) {
                break;
            }
        }
    }
    return out;
}

Lz78Parse lz78_parse(std::span<const double> sequence, int symbols)
{
    if (symbols < 2) {
        throw InvalidArgument("LZ78 needs at least 2 symbols");
    }
    const auto q = static_cast<std::size_t>(symbols);
    // children[node * q + x] = child index or 0 (the root is node 0 and is never a child).
    std::vector<std::size_t> children(q, 0);
    std::size_t node = 0;
    Lz78Parse out;
    for (double v : sequence) {
        const auto x = static_cast<std::size_t>(to_symbol(v, symbols));
        const std::size_t child = children[node * q + x];
        if (child != 0) {
            node = child;
            continue;
        }
        const std::size_t fresh = children.size() / q;
        children[node * q + x] = fresh;
        children.resize(children.size() + q, 0);
        ++out.phrases;
        node = 0;
    }
    if (node != 0) {
        ++out.phrases;
    }
    if (!sequence.empty() && out.phrases > 0) {
        const double c = static_cast<double>(out.phrases);
        out.rho = c * (std::log2(c) + 1.0) / static_cast<double>(sequence.size());
    }
    return out;
}

double lz78_compressibility(std::span<const double> sequence, int symbols)
{
    return lz78_parse(sequence, symbols).rho;
}

SandwichResult sandwich_check(std::span<const double> sequence, int k, const LossFn& loss,
                              const AffineApprox& approx, double per_site_loss)
{
    const EmpiricalModel model(sequence, k, 2);
    SandwichResult out;
    out.entropy = approx.unit == EntropyUnit::bits ? cond_entropy_bits(model) : cond_entropy(model);
    out.per_site_loss = per_site_loss;
    out.residual = std::abs(approx.alpha * out.entropy + approx.beta - per_site_loss);
    out.bound = approx.epsilon + static_cast<double>(k) * loss.l_max() / static_cast<double>(sequence.size());
    out.holds = out.residual <= out.bound + 1e-12;
    return out;
}

SandwichResult sandwich_check_known(double entropy_per_site, const AffineApprox& approx, double per_site_loss)
{
    SandwichResult out;
    out.entropy = entropy_per_site;
    out.per_site_loss = per_site_loss;
    out.residual = std::abs(approx.alpha * entropy_per_site + approx.beta - per_site_loss);
    out.bound = approx.epsilon;
    out.holds = out.residual <= out.bound;
    return out;
}

} // namespace scandict
