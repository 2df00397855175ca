#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace scandict {

// Error kinds. All derive from Error so callers can catch the family.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class InvalidArgument : public Error {
public:
    using Error::Error;
};
class InvalidPartition : public Error {
public:
    using Error::Error;
};
class UnsupportedSize : public Error {
public:
    using Error::Error;
};
class InvalidScanner : public Error {
public:
    using Error::Error;
};
class DomainMismatch : public Error {
public:
    using Error::Error;
};
class NotTabulated : public Error {
public:
    using Error::Error;
};
class ParseError : public Error {
public:
    using Error::Error;
};

struct Site {
    int row = 0;
    int col = 0;
    auto operator<=>(const Site&) const = default;
};

inline Site operator+(Site a, Site b) { return {a.row + b.row, a.col + b.col}; }

inline int l1_distance(Site a, Site b)
{
    const int dr = a.row - b.row, dc = a.col - b.col;
    return (dr < 0 ? -dr : dr) + (dc < 0 ? -dc : dc);
}

// Axis-aligned rectangle [row0, row0+rows) x [col0, col0+cols).
struct Rect {
    int row0 = 0;
    int col0 = 0;
    int rows = 0;
    int cols = 0;

    std::size_t area() const { return static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols); }
    bool contains(Site s) const
    {
        return s.row >= row0 && s.row < row0 + rows && s.col >= col0 && s.col < col0 + cols;
    }
    // Row-major index of s inside the rectangle; s must be contained.
    std::size_t local_index(Site s) const
    {
        return static_cast<std::size_t>(s.row - row0) * static_cast<std::size_t>(cols) +
               static_cast<std::size_t>(s.col - col0);
    }
    bool operator==(const Rect&) const = default;
};

enum class AlphabetKind { binary, finite, real_unit };

struct Alphabet {
    AlphabetKind kind = AlphabetKind::binary;
    int size = 2; // number of symbols for finite kinds; 0 for real_unit

    static Alphabet binary() { return {AlphabetKind::binary, 2}; }
    static Alphabet finite(int q);
    static Alphabet real_unit() { return {AlphabetKind::real_unit, 0}; }

    bool is_finite() const { return kind != AlphabetKind::real_unit; }
    bool admits(double v) const;
    // "binary", "q<size>", or "real"
    std::string tag() const;
    static Alphabet from_tag(const std::string& tag);

    bool operator==(const Alphabet&) const = default;
};

// Dense row-major grid of symbols. Finite-alphabet symbols are stored as
// exact small integers in doubles so one store serves every alphabet.
class DataArray {
public:
    DataArray() = default;
    DataArray(int rows, int cols, Alphabet alphabet);
    DataArray(int rows, int cols, Alphabet alphabet, std::vector<double> cells);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    std::size_t size() const { return cells_.size(); }
    const Alphabet& alphabet() const { return alphabet_; }
    Rect bounds() const { return {0, 0, rows_, cols_}; }

    double at(Site s) const { return cells_[index(s)]; }
    double at(int row, int col) const { return at(Site{row, col}); }
    int symbol(Site s) const { return static_cast<int>(cells_[index(s)]); }
    void set(Site s, double value);

    std::span<const double> cells() const { return cells_; }

    bool operator==(const DataArray&) const = default;

private:
    std::size_t index(Site s) const
    {
        return static_cast<std::size_t>(s.row) * static_cast<std::size_t>(cols_) + static_cast<std::size_t>(s.col);
    }

    int rows_ = 0;
    int cols_ = 0;
    Alphabet alphabet_{};
    std::vector<double> cells_;
};

// SDGRID text format:
//   SDGRID <rows> <cols> <alphabet-tag>
//   <row-major whitespace-separated values>
// Real values are written in shortest round-trip form, so a write/read cycle is bit-exact.
void write_sdgrid(std::ostream& out, const DataArray& array);
DataArray read_sdgrid(std::istream& in);
void save_sdgrid(const std::string& path, const DataArray& array);
DataArray load_sdgrid(const std::string& path);

// Partition of the n x n square into K^2 full m x m blocks and 2K+1 edge blocks,
// K = ceil(n/m) - 1.
struct BlockLayout {
    int n = 0;
    int m = 0;
    int K = 0;
    std::vector<Rect> full_blocks; // row-major over the K x K block grid
    std::vector<Rect> edge_blocks; // right strip top->bottom, bottom strip left->right, corner

    std::size_t block_count() const { return full_blocks.size() + edge_blocks.size(); }
};

BlockLayout block_partition(int n, int m);

// Boustrophedon order over the K x K grid of full blocks, as indices into full_blocks.
std::vector<std::size_t> raster_block_order(const BlockLayout& layout);

// Full blocks in raster_block_order followed by the edge blocks.
std::vector<Rect> ordered_blocks(const BlockLayout& layout);

} // namespace scandict
