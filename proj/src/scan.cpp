#include "scandict/scan.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace scandict {

CoverageTracker::CoverageTracker(const Rect& domain, const DataArray& array) : domain_(domain)
{
    const Rect bounds = array.bounds();
    if (domain.area() == 0 || !bounds.contains({domain.row0, domain.col0}) ||
        !bounds.contains({domain.row0 + domain.rows - 1, domain.col0 + domain.cols - 1})) {
        throw InvalidScanner("scanner domain lies outside the array");
    }
    seen_.assign(domain.area(), 0);
}

void CoverageTracker::visit(Site s)
{
    if (!domain_.contains(s)) {
        throw InvalidScanner("scanner emitted a site outside its domain");
    }
    char& flag = seen_[domain_.local_index(s)];
    if (flag) {
        throw InvalidScanner("scanner revisited a site");
    }
    flag = 1;
}

ScanTrajectory run_scan(Scanner& scanner, const DataArray& array)
{
    const Rect dom = scanner.domain();
    CoverageTracker tracker(dom, array);
    ScanTrajectory traj;
    traj.domain = dom;
    traj.sites.reserve(dom.area());
    traj.values.reserve(dom.area());
    auto visit = [&](Site s) {
        tracker.visit(s);
        traj.sites.push_back(s);
        traj.values.push_back(array.at(s));
    };
    visit(scanner.start());
    for (std::size_t t = 1; t < dom.area(); ++t) {
        visit(scanner.advance(traj.values.back()));
    }
    return traj;
}

OrderScanner::OrderScanner(Rect domain, std::vector<Site> order) : domain_(domain), order_(std::move(order))
{
    if (order_.size() != domain_.area()) {
        throw InvalidScanner("order length does not match the domain");
    }
}

Site OrderScanner::start()
{
    pos_ = 0;
    return order_[0];
}

Site OrderScanner::advance(double)
{
    if (pos_ + 1 >= order_.size()) {
        throw InvalidScanner("scan advanced past its last site");
    }
    return order_[++pos_];
}

RasterOrientation RasterOrientation::from_index(int index)
{
    if (index < 0 || index > 7) {
        throw InvalidArgument("raster orientation index must be in 0..7");
    }
    return {(index & 1) != 0, (index & 2) != 0, (index & 4) != 0};
}

int RasterOrientation::index() const
{
    return (column_major ? 1 : 0) | (reverse_rows ? 2 : 0) | (reverse_cols ? 4 : 0);
}

std::vector<Site> raster_order(const Rect& rect, RasterOrientation o)
{
    std::vector<Site> out;
    out.reserve(rect.area());
    auto row_at = [&](int i) { return rect.row0 + (o.reverse_rows ? rect.rows - 1 - i : i); };
    auto col_at = [&](int j) { return rect.col0 + (o.reverse_cols ? rect.cols - 1 - j : j); };
    if (!o.column_major) {
        for (int i = 0; i < rect.rows; ++i) {
            for (int j = 0; j < rect.cols; ++j) {
                out.push_back({row_at(i), col_at(j)});
            }
        }
    } else {
        for (int j = 0; j < rect.cols; ++j) {
            for (int i = 0; i < rect.rows; ++i) {
                out.push_back({row_at(i), col_at(j)});
            }
        }
    }
    return out;
}

std::vector<Site> serpentine_order(const Rect& rect)
{
    std::vector<Site> out;
    out.reserve(rect.area());
    for (int i = 0; i < rect.rows; ++i) {
        for (int j = 0; j < rect.cols; ++j) {
            const int c = (i % 2 == 0) ? j : rect.cols - 1 - j;
            out.push_back({rect.row0 + i, rect.col0 + c});
        }
    }
    return out;
}

std::vector<Site> hilbert_order(int k)
{
    if (k < 0 || k > 15) {
        throw UnsupportedSize("Hilbert order must be in 0..15");
    }
    const int side = 1 << k;
    const std::size_t total = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
    std::vector<Site> out;
    out.reserve(total);
    for (std::size_t d = 0; d < total; ++d) {
        int x = 0, y = 0;
        std::size_t t = d;
        for (int s = 1; s < side; s *= 2) {
            const int rx = static_cast<int>(1 & (t / 2));
            const int ry = static_cast<int>(1 & (t ^ static_cast<std::size_t>(rx)));
            if (ry == 0) {
                if (rx == 1) {
                    x = s - 1 - x;
                    y = s - 1 - y;
                }
                std::swap(x, y);
            }
            x += s * rx;
            y += s * ry;
            t /= 4;
        }
        out.push_back({y, x});
    }
    return out;
}

std::vector<Site> hilbert_order(const Rect& rect)
{
    if (rect.rows != rect.cols || rect.rows < 1 || (rect.rows & (rect.rows - 1)) != 0) {
        throw UnsupportedSize("Hilbert scan needs a square power-of-two rectangle, got " +
                              std::to_string(rect.rows) + "x" + std::to_string(rect.cols));
    }
    int k = 0;
    while ((1 << k) < rect.rows) {
        ++k;
    }
    std::vector<Site> out = hilbert_order(k);
    for (Site& s : out) {
        s = s + Site{rect.row0, rect.col0};
    }
    return out;
}

std::vector<Site> odds_then_evens_order(int n)
{
    if (n < 1) {
        throw InvalidArgument("odds-then-evens needs n >= 1");
    }
    std::vector<Site> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int c = 0; c < n; c += 2) {
        out.push_back({0, c});
    }
    for (int c = 1; c < n; c += 2) {
        out.push_back({0, c});
    }
    return out;
}

ScannerPtr raster_scan(const Rect& rect, RasterOrientation orientation)
{
    return std::make_unique<OrderScanner>(rect, raster_order(rect, orientation));
}

ScannerPtr serpentine_scan(const Rect& rect) { return std::make_unique<OrderScanner>(rect, serpentine_order(rect)); }

ScannerPtr hilbert_scan(int k)
{
    auto order = hilbert_order(k);
    const int side = 1 << k;
    return std::make_unique<OrderScanner>(Rect{0, 0, side, side}, std::move(order));
}

ScannerPtr hilbert_scan(const Rect& rect) { return std::make_unique<OrderScanner>(rect, hilbert_order(rect)); }

ScannerPtr odds_then_evens(int n)
{
    return std::make_unique<OrderScanner>(Rect{0, 0, 1, n}, odds_then_evens_order(n));
}

ScannerFactory raster_factory(RasterOrientation orientation)
{
    return [orientation](const Rect& r) { return raster_scan(r, orientation); };
}

ScannerFactory serpentine_factory()
{
    return [](const Rect& r) { return serpentine_scan(r); };
}

ScannerFactory hilbert_factory()
{
    return [](const Rect& r) { return hilbert_scan(r); };
}

void FsmScannerSpec::set_transition(int state, int symbol, int next)
{
    if (state < 0 || state >= states || symbol < 0 || symbol > symbols) {
        throw InvalidScanner("transition index out of range");
    }
    next_state[static_cast<std::size_t>(state) * static_cast<std::size_t>(symbols + 1) +
               static_cast<std::size_t>(symbol)] = next;
}

void FsmScannerSpec::validate() const
{
    if (states < 1 || symbols < 1) {
        throw InvalidScanner("FSM needs at least one state and one symbol");
    }
    if (initial_state < 0 || initial_state >= states) {
        throw InvalidScanner("initial state out of range");
    }
    if (next_state.size() != static_cast<std::size_t>(states) * static_cast<std::size_t>(symbols + 1)) {
        throw InvalidScanner("transition table is not total");
    }
    if (displacement.size() != static_cast<std::size_t>(states)) {
        throw InvalidScanner("displacement table is not total");
    }
    for (int s : next_state) {
        if (s < 0 || s >= states) {
            throw InvalidScanner("transition to an unknown state");
        }
    }
}

void write_fsmscan(std::ostream& out, const FsmScannerSpec& spec)
{
    spec.validate();
    out << "FSMSCAN " << spec.states << ' ' << spec.symbols << ' ' << spec.initial_state << ' '
        << spec.initial_site.row << ' ' << spec.initial_site.col << '\n';
    for (int s = 0; s < spec.states; ++s) {
        for (int a = 0; a <= spec.symbols; ++a) {
            out << "T " << s << ' ';
            if (a == spec.eof()) {
                out << "EOF";
            } else {
                out << a;
            }
            out << ' ' << spec.transition(s, a) << '\n';
        }
    }
    for (int s = 0; s < spec.states; ++s) {
        const Site d = spec.displacement[static_cast<std::size_t>(s)];
        out << "D " << s << ' ' << d.row << ' ' << d.col << '\n';
    }
}

FsmScannerSpec read_fsmscan(std::istream& in)
{
    std::string magic;
    FsmScannerSpec spec;
    if (!(in >> magic >> spec.states >> spec.symbols >> spec.initial_state >> spec.initial_site.row >>
          spec.initial_site.col) ||
        magic != "FSMSCAN") {
        throw ParseError("missing FSMSCAN header");
    }
    if (spec.states < 1 || spec.symbols < 1 || spec.states > 1'000'000 || spec.symbols > 1'000'000) {
        throw ParseError("FSMSCAN sizes out of range");
    }
    constexpr int unset = std::numeric_limits<int>::min();
    spec.next_state.assign(static_cast<std::size_t>(spec.states) * static_cast<std::size_t>(spec.symbols + 1), unset);
    spec.displacement.assign(static_cast<std::size_t>(spec.states), Site{unset, unset});
    std::string kind;
    while (in >> kind) {
        if (kind == "T") {
            int state = 0, next = 0;
            std::string sym;
            if (!(in >> state >> sym >> next)) {
                throw ParseError("malformed FSMSCAN transition line");
            }
            int symbol = 0;
            if (sym == "EOF") {
                symbol = spec.eof();
            } else {
                try {
                    std::size_t used = 0;
                    symbol = std::stoi(sym, &used);
                    if (used != sym.size() || symbol < 0 || symbol >= spec.symbols) {
                        throw ParseError("");
                    }
                } catch (const std::exception&) {
                    throw ParseError("bad FSMSCAN symbol '" + sym + "'");
                }
            }
            if (state < 0 || state >= spec.states) {
                throw ParseError("FSMSCAN transition for unknown state");
            }
            spec.set_transition(state, symbol, next);
        } else if (kind == "D") {
            int state = 0;
            Site d;
            if (!(in >> state >> d.row >> d.col) || state < 0 || state >= spec.states) {
                throw ParseError("malformed FSMSCAN displacement line");
            }
            spec.displacement[static_cast<std::size_t>(state)] = d;
        } else {
            throw ParseError("unknown FSMSCAN line kind '" + kind + "'");
        }
    }
    for (int s : spec.next_state) {
        if (s == unset) {
            throw ParseError("FSMSCAN transition table is incomplete");
        }
    }
    for (const Site& d : spec.displacement) {
        if (d.row == unset) {
            throw ParseError("FSMSCAN displacement table is incomplete");
        }
    }
    try {
        spec.validate();
    } catch (const InvalidScanner& e) {
        throw ParseError(e.what());
    }
    return spec;
}

FsmScannerSpec serpentine_fsm(int symbols)
{
    enum { right = 0, down_left = 1, left = 2, down_right = 3 };
    FsmScannerSpec spec;
    spec.states = 4;
    spec.symbols = symbols;
    spec.initial_state = right;
    spec.initial_site = {0, 0};
    spec.next_state.assign(static_cast<std::size_t>(4 * (symbols + 1)), 0);
    spec.displacement = {{0, 1}, {1, -1}, {0, -1}, {1, 1}};
    for (int a = 0; a < symbols; ++a) {
        spec.set_transition(right, a, right);
        spec.set_transition(down_left, a, left);
        spec.set_transition(left, a, left);
        spec.set_transition(down_right, a, right);
    }
    spec.set_transition(right, spec.eof(), down_left);
    spec.set_transition(down_left, spec.eof(), down_left);
    spec.set_transition(left, spec.eof(), down_right);
    spec.set_transition(down_right, spec.eof(), down_right);
    return spec;
}

FsmScanner::FsmScanner(FsmScannerSpec spec, Rect domain) : spec_(std::move(spec)), domain_(domain)
{
    spec_.validate();
}

int FsmScanner::symbol_of(double v) const
{
    const int s = static_cast<int>(v);
    if (static_cast<double>(s) != v || s < 0 || s >= spec_.symbols) {
        throw InvalidScanner("value is not a symbol of the FSM alphabet");
    }
    return s;
}

Site FsmScanner::start()
{
    state_ = spec_.initial_state;
    head_ = Site{domain_.row0, domain_.col0} + spec_.initial_site;
    if (!domain_.contains(head_)) {
        throw InvalidScanner("FSM initial site lies outside the domain");
    }
    visited_.assign(domain_.area(), 0);
    visited_[domain_.local_index(head_)] = 1;
    visits_ = 1;
    eof_reads_ = 0;
    return head_;
}

Site FsmScanner::advance(double observed)
{
    if (visits_ >= domain_.area()) {
        throw InvalidScanner("FSM advanced after covering its domain");
    }
    const std::size_t eof_budget = static_cast<std::size_t>(spec_.states) * domain_.area();
    state_ = spec_.transition(state_, symbol_of(observed));
    head_ = head_ + spec_.displacement[static_cast<std::size_t>(state_)];
    while (!domain_.contains(head_)) {
        if (++eof_reads_ > eof_budget) {
            throw InvalidScanner("FSM exhausted its step budget before covering the grid");
        }
        state_ = spec_.transition(state_, spec_.eof());
        head_ = head_ + spec_.displacement[static_cast<std::size_t>(state_)];
    }
    char& flag = visited_[domain_.local_index(head_)];
    if (flag) {
        throw InvalidScanner("FSM revisited site (" + std::to_string(head_.row) + "," + std::to_string(head_.col) +
                             ")");
    }
    flag = 1;
    ++visits_;
    return head_;
}

ScanTrajectory fsm_scan(const FsmScannerSpec& spec, const DataArray& array)
{
    FsmScanner scanner(spec, array.bounds());
    return run_scan(scanner, array);
}

BlockwiseScanner::BlockwiseScanner(Rect domain, std::vector<Rect> blocks, std::vector<ScannerPtr> inner)
    : domain_(domain), blocks_(std::move(blocks)), inner_(std::move(inner))
{
    if (blocks_.empty() || blocks_.size() != inner_.size()) {
        throw InvalidArgument("one inner scanner is needed per block");
    }
    std::size_t total = 0;
    for (std::size_t b = 0; b < blocks_.size(); ++b) {
        if (!(inner_[b]->domain() == blocks_[b])) {
            throw InvalidArgument("inner scanner domain differs from its block");
        }
        total += blocks_[b].area();
    }
    if (total != domain_.area()) {
        throw InvalidArgument("blocks do not tile the domain");
    }
}

BlockwiseScanner::BlockwiseScanner(const BlockwiseScanner& other)
    : domain_(other.domain_), blocks_(other.blocks_), block_(other.block_), step_in_block_(other.step_in_block_)
{
    inner_.reserve(other.inner_.size());
    for (const auto& s : other.inner_) {
        inner_.push_back(s->clone());
    }
}

Site BlockwiseScanner::start()
{
    block_ = 0;
    step_in_block_ = 0;
    return inner_[0]->start();
}

Site BlockwiseScanner::advance(double observed)
{
    if (step_in_block_ + 1 < blocks_[block_].area()) {
        ++step_in_block_;
        return inner_[block_]->advance(observed);
    }
    if (++block_ >= blocks_.size()) {
        throw InvalidScanner("scan advanced past its last block");
    }
    step_in_block_ = 0;
    return inner_[block_]->start();
}

std::vector<std::size_t> BlockwiseScanner::block_starts() const
{
    std::vector<std::size_t> out;
    out.reserve(blocks_.size());
    std::size_t pos = 0;
    for (const Rect& b : blocks_) {
        out.push_back(pos);
        pos += b.area();
    }
    return out;
}

std::unique_ptr<BlockwiseScanner> blockwise_compose(const BlockLayout& layout, const ScannerFactory& inner,
                                                    const ScannerFactory& edge)
{
    std::vector<Rect> blocks = ordered_blocks(layout);
    std::vector<ScannerPtr> scanners;
    scanners.reserve(blocks.size());
    const std::size_t full = layout.full_blocks.size();
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        scanners.push_back(b < full ? inner(blocks[b]) : edge(blocks[b]));
    }
    return std::make_unique<BlockwiseScanner>(Rect{0, 0, layout.n, layout.n}, std::move(blocks), std::move(scanners));
}

std::size_t context_overlap(std::span<const Site> a, std::span<const Site> b, int K)
{
    if (K < 1) {
        throw InvalidArgument("context window must be >= 1");
    }
    if (a.size() != b.size()) {
        throw DomainMismatch("trajectories have different lengths");
    }
    if (a.empty()) {
        return 0;
    }
    int r0 = b[0].row, r1 = b[0].row, c0 = b[0].col, c1 = b[0].col;
    for (const Site& s : b) {
        r0 = std::min(r0, s.row);
        r1 = std::max(r1, s.row);
        c0 = std::min(c0, s.col);
        c1 = std::max(c1, s.col);
    }
    const Rect box{r0, c0, r1 - r0 + 1, c1 - c0 + 1};
    constexpr std::size_t absent = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> pos_b(box.area(), absent);
    for (std::size_t j = 0; j < b.size(); ++j) {
        std::size_t& slot = pos_b[box.local_index(b[j])];
        if (slot != absent) {
            throw DomainMismatch("trajectory repeats a site");
        }
        slot = j;
    }
    std::vector<char> seen(box.area(), 0);
    for (const Site& s : a) {
        if (!box.contains(s) || pos_b[box.local_index(s)] == absent || seen[box.local_index(s)]) {
            throw DomainMismatch("trajectories cover different site sets");
        }
        seen[box.local_index(s)] = 1;
    }
    std::size_t count = 0;
    const auto window = static_cast<std::size_t>(K);
    for (std::size_t i = 1; i < a.size(); ++i) {
        const std::size_t here = pos_b[box.local_index(a[i])];
        const std::size_t prev = pos_b[box.local_index(a[i - 1])];
        if (prev < here && here - prev <= window) {
            ++count;
        }
    }
    return count;
}

} // namespace scandict
