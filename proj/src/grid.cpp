#include "scandict/grid.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace scandict {

Alphabet Alphabet::finite(int q)
{
    if (q < 2) {
        throw InvalidArgument("finite alphabet needs at least 2 symbols");
    }
    if (q == 2) {
        return binary();
    }
    return {AlphabetKind::finite, q};
}

bool Alphabet::admits(double v) const
{
    if (kind == AlphabetKind::real_unit) {
        return v >= 0.0 && v <= 1.0;
    }
    return v >= 0.0 && v < static_cast<double>(size) && std::floor(v) == v;
}

std::string Alphabet::tag() const
{
    switch (kind) {
    case AlphabetKind::binary:
        return "binary";
    case AlphabetKind::finite:
        return "q" + std::to_string(size);
    case AlphabetKind::real_unit:
        return "real";
    }
    return "binary";
}

Alphabet Alphabet::from_tag(const std::string& tag)
{
    if (tag == "binary") {
        return binary();
    }
    if (tag == "real") {
        return real_unit();
    }
    if (tag.size() > 1 && tag[0] == 'q') {
        int q = 0;
        auto [ptr, ec] = std::from_chars(tag.data() + 1, tag.data() + tag.size(), q);
        if (ec == std::errc() && ptr == tag.data() + tag.size()) {
            return finite(q);
        }
    }
    throw ParseError("unknown alphabet tag '" + tag + "'");
}

DataArray::DataArray(int rows, int cols, Alphabet alphabet)
    : rows_(rows), cols_(cols), alphabet_(alphabet)
{
    if (rows < 1 || cols < 1) {
        throw InvalidArgument("DataArray dimensions must be positive");
    }
    cells_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0.0);
}

DataArray::DataArray(int rows, int cols, Alphabet alphabet, std::vector<double> cells)
    : rows_(rows), cols_(cols), alphabet_(alphabet), cells_(std::move(cells))
{
    if (rows < 1 || cols < 1) {
        throw InvalidArgument("DataArray dimensions must be positive");
    }
    if (cells_.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw InvalidArgument("DataArray cell count does not match its shape");
    }
    for (double v : cells_) {
        if (!alphabet_.admits(v)) {
            throw InvalidArgument("value not legal for alphabet " + alphabet_.tag());
        }
    }
}

void DataArray::set(Site s, double value)
{
    if (!bounds().contains(s)) {
        throw InvalidArgument("site outside the array");
    }
    if (!alphabet_.admits(value)) {
        throw InvalidArgument("value not legal for alphabet " + alphabet_.tag());
    }
    cells_[index(s)] = value;
}

namespace {

void append_value(std::string& line, double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    line.append(buf, ptr);
}

} // namespace

void write_sdgrid(std::ostream& out, const DataArray& array)
{
    out << "SDGRID " << array.rows() << ' ' << array.cols() << ' ' << array.alphabet().tag() << '\n';
    std::string line;
    for (int r = 0; r < array.rows(); ++r) {
        line.clear();
        for (int c = 0; c < array.cols(); ++c) {
            if (c) {
                line.push_back(' ');
            }
            append_value(line, array.at(r, c));
        }
        line.push_back('\n');
        out << line;
    }
}

DataArray read_sdgrid(std::istream& in)
{
    std::string magic, tag;
    int rows = 0, cols = 0;
    if (!(in >> magic >> rows >> cols >> tag) || magic != "SDGRID") {
        throw ParseError("missing SDGRID header");
    }
    if (rows < 1 || cols < 1) {
        throw ParseError("SDGRID dimensions must be positive");
    }
    const Alphabet alphabet = Alphabet::from_tag(tag);
    std::vector<double> cells;
    cells.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    std::string token;
    while (cells.size() < static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) && in >> token) {
        double v = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size()) {
            throw ParseError("bad SDGRID value '" + token + "'");
        }
        cells.push_back(v);
    }
    if (cells.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
        throw ParseError("SDGRID body is shorter than its header declares");
    }
    if (in >> token) {
        throw ParseError("trailing data after SDGRID body");
    }
    try {
        return DataArray(rows, cols, alphabet, std::move(cells));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what());
    }
}

void save_sdgrid(const std::string& path, const DataArray& array)
{
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot open '" + path + "' for writing");
    }
    write_sdgrid(out, array);
}

DataArray load_sdgrid(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open '" + path + "'");
    }
    return read_sdgrid(in);
}

BlockLayout block_partition(int n, int m)
{
    if (m < 1 || m >= n) {
        throw InvalidPartition("block side must satisfy 1 <= m < n (n=" + std::to_string(n) +
                               ", m=" + std::to_string(m) + ")");
    }
    BlockLayout layout;
    layout.n = n;
    layout.m = m;
    layout.K = (n + m - 1) / m - 1;
    const int K = layout.K;
    const int rest = n - K * m;

    layout.full_blocks.reserve(static_cast<std::size_t>(K) * K);
    for (int br = 0; br < K; ++br) {
        for (int bc = 0; bc < K; ++bc) {
            layout.full_blocks.push_back({br * m, bc * m, m, m});
        }
    }
    layout.edge_blocks.reserve(2 * static_cast<std::size_t>(K) + 1);
    for (int br = 0; br < K; ++br) {
        layout.edge_blocks.push_back({br * m, K * m, m, rest});
    }
    for (int bc = 0; bc < K; ++bc) {
        layout.edge_blocks.push_back({K * m, bc * m, rest, m});
    }
    layout.edge_blocks.push_back({K * m, K * m, rest, rest});
    return layout;
}

std::vector<std::size_t> raster_block_order(const BlockLayout& layout)
{
    const auto K = static_cast<std::size_t>(layout.K);
    std::vector<std::size_t> order;
    order.reserve(K * K);
    for (std::size_t br = 0; br < K; ++br) {
        for (std::size_t i = 0; i < K; ++i) {
            const std::size_t bc = (br % 2 == 0) ? i : K - 1 - i;
            order.push_back(br * K + bc);
        }
    }
    return order;
}

std::vector<Rect> ordered_blocks(const BlockLayout& layout)
{
    std::vector<Rect> blocks;
    blocks.reserve(layout.block_count());
    for (std::size_t idx : raster_block_order(layout)) {
        blocks.push_back(layout.full_blocks[idx]);
    }
    blocks.insert(blocks.end(), layout.edge_blocks.begin(), layout.edge_blocks.end());
    return blocks;
}

} // namespace scandict
