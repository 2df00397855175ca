#include <set>
#include <sstream>

#include "doctest.h"
#include "scandict/grid.hpp"
#include "scandict/rng.hpp"

using namespace scandict;

TEST_SUITE("grid") {

TEST_CASE("partition of a 5x5 square into 2x2 blocks")
{
    const BlockLayout layout = block_partition(5, 2);
    CHECK(layout.K == 2);
    CHECK(layout.full_blocks.size() == 4);
    CHECK(layout.edge_blocks.size() == 5);
    CHECK(layout.edge_blocks.back() == Rect{4, 4, 1, 1});
    CHECK(layout.edge_blocks[0] == Rect{0, 4, 2, 1});
    CHECK(layout.edge_blocks[2] == Rect{4, 0, 1, 2});
}

TEST_CASE("partition tiles the square exactly")
{
    for (int n = 2; n <= 17; ++n) {
        for (int m = 1; m < n; ++m) {
            const BlockLayout layout = block_partition(n, m);
            std::vector<int> cover(static_cast<std::size_t>(n * n), 0);
            for (const Rect& r : ordered_blocks(layout)) {
                for (int i = r.row0; i < r.row0 + r.rows; ++i) {
                    for (int j = r.col0; j < r.col0 + r.cols; ++j) {
                        ++cover[static_cast<std::size_t>(i * n + j)];
                    }
                }
            }
            for (int c : cover) {
                REQUIRE(c == 1);
            }
            CHECK(layout.block_count() == static_cast<std::size_t>((layout.K + 1) * (layout.K + 1)));
        }
    }
}

TEST_CASE("partition rejects m >= n and m < 1")
{
    CHECK_THROWS_AS(block_partition(4, 4), InvalidPartition);
    CHECK_THROWS_AS(block_partition(4, 0), InvalidPartition);
}

TEST_CASE("boustrophedon block order for K = 3")
{
    const BlockLayout layout = block_partition(8, 2); // K = 3
    REQUIRE(layout.K == 3);
    const std::vector<std::size_t> expected{0, 1, 2, 5, 4, 3, 6, 7, 8};
    CHECK(raster_block_order(layout) == expected);
}

TEST_CASE("consecutive blocks in the boustrophedon order share an edge")
{
    const BlockLayout layout = block_partition(23, 3);
    const auto order = raster_block_order(layout);
    for (std::size_t i = 1; i < order.size(); ++i) {
        const Rect& a = layout.full_blocks[order[i - 1]];
        const Rect& b = layout.full_blocks[order[i]];
        CHECK(l1_distance({a.row0, a.col0}, {b.row0, b.col0}) == 3);
    }
}

TEST_CASE("alphabet tags round trip")
{
    for (const Alphabet& a : {Alphabet::binary(), Alphabet::finite(5), Alphabet::real_unit()}) {
        CHECK(Alphabet::from_tag(a.tag()) == a);
    }
    CHECK_THROWS(Alphabet::from_tag("q1"));
    CHECK(Alphabet::binary().admits(1.0));
    CHECK_FALSE(Alphabet::binary().admits(0.5));
    CHECK(Alphabet::real_unit().admits(0.5));
}

TEST_CASE("SDGRID round trip is bit exact")
{
    Rng rng(7);
    for (const Alphabet& alphabet : {Alphabet::binary(), Alphabet::finite(4), Alphabet::real_unit()}) {
        DataArray a(5, 7, alphabet);
        for (int r = 0; r < 5; ++r) {
            for (int c = 0; c < 7; ++c) {
                const double v = alphabet.kind == AlphabetKind::real_unit
                                     ? rng.uniform()
                                     : static_cast<double>(rng.below(static_cast<std::uint64_t>(alphabet.size)));
                a.set({r, c}, v);
            }
        }
        std::stringstream io;
        write_sdgrid(io, a);
        CHECK(read_sdgrid(io) == a);
    }
}

TEST_CASE("SDGRID rejects malformed input")
{
    std::istringstream bad_magic("GRID 2 2 binary\n0 1 1 0\n");
    CHECK_THROWS_AS(read_sdgrid(bad_magic), ParseError);
    std::istringstream short_body("SDGRID 2 2 binary\n0 1 1\n");
    CHECK_THROWS_AS(read_sdgrid(short_body), ParseError);
    std::istringstream bad_symbol("SDGRID 1 2 binary\n0 2\n");
    CHECK_THROWS_AS(read_sdgrid(bad_symbol), ParseError);
}

TEST_CASE("set rejects values outside the alphabet")
{
    DataArray a(2, 2, Alphabet::binary());
    CHECK_THROWS(a.set({0, 0}, 0.5));
}

TEST_CASE("rng is reproducible and categorical respects zero weights")
{
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(a.next() == b.next());
    }
    Rng c(3);
    const std::vector<double> w{0.0, 1.0, 0.0, 2.0};
    std::set<std::size_t> seen;
    for (int i = 0; i < 1000; ++i) {
        seen.insert(c.categorical(w));
    }
    CHECK(seen == std::set<std::size_t>{1, 3});
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(c.below(7) < 7);
    }
}

}
