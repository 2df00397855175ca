#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <vector>

#include "scandict/grid.hpp"

namespace scandict {

// A scanner visits every site of its domain exactly once. The next site may depend on the
// values observed so far: start() yields the first site, advance(v) takes the value found at
// the current site and yields the next one. advance is called |domain| - 1 times.
class Scanner {
public:
    virtual ~Scanner() = default;
    virtual Rect domain() const = 0;
    virtual Site start() = 0;
    virtual Site advance(double observed) = 0;
    virtual std::unique_ptr<Scanner> clone() const = 0;
};

using ScannerPtr = std::unique_ptr<Scanner>;
using ScannerFactory = std::function<ScannerPtr(const Rect&)>;

struct ScanTrajectory {
    Rect domain{};
    std::vector<Site> sites;
    std::vector<double> values;

    std::size_t size() const { return sites.size(); }
};

// Incremental check of the coverage property for scan drivers.
class CoverageTracker {
public:
    // Throws InvalidScanner if the domain is empty or not inside the array.
    CoverageTracker(const Rect& domain, const DataArray& array);
    // Throws InvalidScanner on a repeated or out-of-domain site.
    void visit(Site s);

private:
    Rect domain_;
    std::vector<char> seen_;
};

// Runs a scanner over its domain of `array` and checks the coverage property.
// Throws InvalidScanner on a repeated or out-of-domain site.
ScanTrajectory run_scan(Scanner& scanner, const DataArray& array);

// Fixed visiting order, independent of the data.
class OrderScanner final : public Scanner {
public:
    OrderScanner(Rect domain, std::vector<Site> order);

    Rect domain() const override { return domain_; }
    Site start() override;
    Site advance(double observed) override;
    ScannerPtr clone() const override { return std::make_unique<OrderScanner>(*this); }

    const std::vector<Site>& order() const { return order_; }

private:
    Rect domain_;
    std::vector<Site> order_;
    std::size_t pos_ = 0;
};

// The eight axis-aligned raster variants.
struct RasterOrientation {
    bool column_major = false;
    bool reverse_rows = false; // bottom-up
    bool reverse_cols = false; // right-to-left

    static RasterOrientation from_index(int index); // 0..7, bit 0 column_major, bit 1 rows, bit 2 cols
    int index() const;
};

std::vector<Site> raster_order(const Rect& rect, RasterOrientation orientation = {});
std::vector<Site> serpentine_order(const Rect& rect);
// 2^k x 2^k Hilbert curve starting at the top-left corner; k = 1 gives (0,0),(1,0),(1,1),(0,1).
std::vector<Site> hilbert_order(int k);
// Hilbert order on a square power-of-two rectangle; otherwise UnsupportedSize.
std::vector<Site> hilbert_order(const Rect& rect);
// 1 x n row: even 0-based columns first (odd 1-based indices), then the rest.
std::vector<Site> odds_then_evens_order(int n);

ScannerPtr raster_scan(const Rect& rect, RasterOrientation orientation = {});
ScannerPtr serpentine_scan(const Rect& rect);
ScannerPtr hilbert_scan(int k);
ScannerPtr hilbert_scan(const Rect& rect);
ScannerPtr odds_then_evens(int n);

ScannerFactory raster_factory(RasterOrientation orientation = {});
ScannerFactory serpentine_factory();
ScannerFactory hilbert_factory();

// Finite-state scanner machine. Symbols are 0..symbols-1; symbol index `symbols` is EoF,
// read whenever the head stands outside the domain.
struct FsmScannerSpec {
    int states = 1;
    int symbols = 2;
    int initial_state = 0;
    Site initial_site{}; // relative to the domain origin
    std::vector<int> next_state;    // states x (symbols + 1)
    std::vector<Site> displacement; // per state

    int eof() const { return symbols; }
    int transition(int state, int symbol) const
    {
        return next_state[static_cast<std::size_t>(state) * static_cast<std::size_t>(symbols + 1) +
                          static_cast<std::size_t>(symbol)];
    }
    void set_transition(int state, int symbol, int next);
    // Throws InvalidScanner if tables are not total or reference unknown states.
    void validate() const;

    bool operator==(const FsmScannerSpec&) const = default;
};

// FSMSCAN text format:
//   FSMSCAN <states> <symbols> <initial_state> <init_row> <init_col>
//   T <state> <symbol|EOF> <next_state>     one per (state, symbol) pair
//   D <state> <drow> <dcol>                 one per state
void write_fsmscan(std::ostream& out, const FsmScannerSpec& spec);
FsmScannerSpec read_fsmscan(std::istream& in);

// Four-state boustrophedon machine: R, down-left, L, down-right.
FsmScannerSpec serpentine_fsm(int symbols = 2);

class FsmScanner final : public Scanner {
public:
    FsmScanner(FsmScannerSpec spec, Rect domain);

    Rect domain() const override { return domain_; }
    Site start() override;
    Site advance(double observed) override;
    ScannerPtr clone() const override { return std::make_unique<FsmScanner>(*this); }

private:
    int symbol_of(double v) const;

    FsmScannerSpec spec_;
    Rect domain_;
    int state_ = 0;
    Site head_{};
    std::vector<char> visited_;
    std::size_t visits_ = 0;
    std::size_t eof_reads_ = 0;
};

// Runs an FSM over the whole array. Throws InvalidScanner if it revisits a site or exhausts
// its step budget (|domain| visits plus |states| * |domain| EoF reads) before covering the grid.
ScanTrajectory fsm_scan(const FsmScannerSpec& spec, const DataArray& array);

// Visits the given blocks in order, running a fresh inner scanner on each.
class BlockwiseScanner final : public Scanner {
public:
    BlockwiseScanner(Rect domain, std::vector<Rect> blocks, std::vector<ScannerPtr> inner);
    BlockwiseScanner(const BlockwiseScanner& other);

    Rect domain() const override { return domain_; }
    Site start() override;
    Site advance(double observed) override;
    ScannerPtr clone() const override { return std::make_unique<BlockwiseScanner>(*this); }

    const std::vector<Rect>& blocks() const { return blocks_; }
    // Trajectory positions at which each block begins.
    std::vector<std::size_t> block_starts() const;

private:
    Rect domain_;
    std::vector<Rect> blocks_;
    std::vector<ScannerPtr> inner_;
    std::size_t block_ = 0;
    std::size_t step_in_block_ = 0;
};

// Full blocks in boustrophedon order with `inner`, then edge blocks with `edge` (raster by default).
std::unique_ptr<BlockwiseScanner> blockwise_compose(const BlockLayout& layout, const ScannerFactory& inner,
                                                    const ScannerFactory& edge = raster_factory());

// Number of positions i >= 1 (0-based) in a whose predecessor a[i-1] lies among the K sites
// preceding a[i] in b. Throws DomainMismatch if the site sets differ.
std::size_t context_overlap(std::span<const Site> a, std::span<const Site> b, int K);

} // namespace scandict
