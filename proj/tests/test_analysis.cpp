#include <doctest.h>

#include <deque>

#include "blpack/analysis.hpp"
#include "blpack/generators.hpp"
#include "blpack/io.hpp"

using namespace blpack;

namespace {

// Forward oracle: after each step, cells not covered by the first i items and
// not reachable from the top row are bounded. Birth = first such step.
std::vector<std::int32_t> forward_births(const PieceMap& m) {
    const PackingTrace& t = m.trace();
    const std::size_t nx = m.nx(), ny = m.ny(), n = nx * ny;
    std::vector<std::int32_t> birth(n, -1);
    std::vector<char> covered(n, 0);
    for (std::size_t i = 1; i <= t.size(); ++i) {
        const Placement& p = t.steps()[i - 1];
        const Item& it = t.instance().item(p.id);
        for (std::uint32_t c = 0; c < n; ++c) {
            CellRect r = m.rect(c);
            if (r.x0 < p.x + it.w && p.x < r.x1 && r.y0 < p.y + it.h && p.y < r.y1) covered[c] = 1;
        }
        std::vector<char> open(n, 0);
        std::deque<std::uint32_t> q;
        for (std::size_t x = 0; x < nx; ++x) {
            std::uint32_t c = m.index(x, ny - 1);
            if (!covered[c]) {
                open[c] = 1;
                q.push_back(c);
            }
        }
        while (!q.empty()) {
            std::uint32_t c = q.front();
            q.pop_front();
            const long x = static_cast<long>(m.ix(c)), y = static_cast<long>(m.iy(c));
            const long d[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
            for (auto& s : d) {
                long a = x + s[0], b = y + s[1];
                if (a < 0 || b < 0 || a >= static_cast<long>(nx) || b >= static_cast<long>(ny)) continue;
                std::uint32_t e = m.index(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
                if (!covered[e] && !open[e]) {
                    open[e] = 1;
                    q.push_back(e);
                }
            }
        }
        for (std::uint32_t c = 0; c < n; ++c)
            if (!covered[c] && !open[c] && birth[c] < 0) birth[c] = static_cast<std::int32_t>(i);
    }
    return birth;
}

PackingTrace trace_of(Rational w, std::vector<Rational> sizes) {
    auto inst = std::make_shared<const Instance>(Instance::from_squares(w, sizes));
    return pack(inst, Ordering::identity(inst->size()));
}

}  // namespace

TEST_CASE("piece births agree with the forward per-step oracle") {
    for (const RandomCase& c : random_corpus(120, 31)) {
        PieceMap m(pack(c.instance, c.ordering));
        std::vector<std::int32_t> want = forward_births(m);
        for (std::uint32_t cell = 0; cell < want.size(); ++cell) CHECK(m.birth(cell) == want[cell]);
        Rational total = 0, flood = m.bounded_free_area_flood();
        for (const Piece& p : m.pieces()) total += p.free_area_at_end;
        CHECK(total == flood);
    }
}

TEST_CASE("W=6 example: one middle piece under the top square") {
    PackingTrace t = trace_of(6, {2, 1, 2, 3});
    AnalysisReport r = analyze(t);
    REQUIRE(r.pieces.size() == 1);
    const PieceVerdict& v = r.pieces[0];
    CHECK(v.piece.cls == PieceClass::middle);
    CHECK(v.piece.area == 1);
    CHECK(v.piece.birth_step == 4);
    CHECK(v.graph.valid());
    CHECK(v.graph.circuit.size() == 4);
    CHECK(v.graph.circuit[v.graph.top] == Vertex::item(3));
    CHECK(v.structure.ok);
    REQUIRE(v.peaks.peaks.size() == 1);
    CHECK(v.peaks.peaks[0] == Vertex::item(3));
    REQUIRE(v.cover.subpieces.size() == 1);
    CHECK(v.cover.subpieces[0].label == "V_top");
    CHECK(v.cover.subpieces[0].width == 1);
    CHECK(v.cover.subpieces[0].height == 1);
    CHECK(v.wide.ok);
    // (b),(c) do not apply: pen -> end is of right type
    for (const WideCheck& c : v.wide.checks) CHECK(c.clause == "a");
    CHECK(r.trenches.right_trenches == 1);
    CHECK(r.ok());
}

TEST_CASE("tight packing has no pieces") {
    AnalysisReport r = analyze(trace_of(4, {2, 2, 2, 2}));
    CHECK(r.pieces.empty());
    CHECK(r.trenches.trenches.empty());
    CHECK(r.ok());
}

TEST_CASE("arrow types follow face equalities") {
    VertexFaces a{0, 2, 0, Rational(2)}, b{2, 3, 0, Rational(1)}, c{0, 1, 2, Rational(3)};
    CHECK((arrow_types(a, b) & kRightType));
    CHECK((arrow_types(b, a) & kLeftType));
    CHECK((arrow_types(a, c) & kUpType));
    CHECK((arrow_types(c, a) & kDownType));
    // corner contact carries both applicable types
    VertexFaces d{2, 3, 2, Rational(3)};
    CHECK(arrow_types(a, d) == (kRightType | kUpType));
}

TEST_CASE("bottom-left verification rejects a non bottom-left packing") {
    GeneratedCase c = gen_rect_43(Rational(1, 100));
    const Packing& opt = c.reference_packings.at("opt");
    std::vector<ItemId> ids;
    for (const Placement& p : opt.placements()) ids.push_back(p.id);
    PackingTrace t(c.instance, Ordering(ids), opt.placements());
    CHECK_FALSE(verify_bottom_left(t).ok);
}

TEST_CASE("every placed item of a bottom-left packing is supported") {
    for (const RandomCase& c : random_corpus(100, 44)) {
        Packing p = pack(c.instance, c.ordering).final_packing();
        for (ItemId id = 0; id < c.instance->size(); ++id) CHECK(has_support(p, id));
    }
}

TEST_CASE("wide-squares checks are not applicable for non bottom-left packings") {
    auto inst = std::make_shared<const Instance>(Instance::from_squares(6, {2, 1, 2, 3}));
    PackingTrace bl = pack(inst, Ordering::identity(4));
    PieceMap m(bl);
    PieceGraph pg = build_piece_graph(m, 0);
    CoverPartition cp = natural_cover_partition(m, pg);
    WideSquaresReport w = check_wide_squares(m, cp, pg, false);
    CHECK_FALSE(w.applicable);
    CHECK(w.checks.empty());
}

TEST_CASE("structure, cover and measure invariants on named constructions") {
    std::vector<PackingTrace> traces;
    GeneratedCase cb = gen_checkerboard(4);
    traces.push_back(pack(cb.instance, cb.orderings.at("decreasing")));
    GeneratedCase tt = gen_ten_thirds(2);
    traces.push_back(pack(tt.instance, tt.orderings.at("adversarial")));
    for (const PackingTrace& t : traces) {
        AnalysisReport r = analyze(t);
        CHECK(r.bottom_left.ok);
        CHECK(r.flood_agrees);
        CHECK(r.trenches.measure_identity);
        CHECK(r.trenches.right_trenches <= 1);
        for (const PieceVerdict& v : r.pieces) {
            CHECK(v.graph.valid());
            CHECK(v.graph.circuit.size() >= 4);
            CHECK(v.structure.ok);
            CHECK(v.peaks.ok);
            CHECK(v.cover.ok);
            CHECK(v.wide.ok);
        }
        REQUIRE(r.bound);
        CHECK(r.bound->pass);
    }
}

TEST_CASE("cover partitions unite to the piece with nested lines") {
    for (const RandomCase& c : random_corpus(150, 8)) {
        PieceMap m(pack(c.instance, c.ordering));
        for (std::size_t i = 0; i < m.pieces().size(); ++i) {
            PieceGraph pg = build_piece_graph(m, i);
            CoverPartition cp = natural_cover_partition(m, pg);
            std::vector<int> hits(m.nx() * m.ny(), 0);
            for (const Subpiece& s : cp.subpieces) {
                CHECK(cells_connected(m, s.cells));
                CHECK(nested_lines(m, s.cells));
                for (std::uint32_t cell : s.cells) ++hits[cell];
            }
            for (std::uint32_t cell : m.pieces()[i].cells) CHECK(hits[cell] == 1);
            std::size_t total = 0;
            for (int h : hits) total += static_cast<std::size_t>(h);
            CHECK(total == m.pieces()[i].cells.size());
        }
    }
}

TEST_CASE("global bound arithmetic") {
    GeneratedCase c = gen_checkerboard(4);
    Packing p = pack(c.instance, c.orderings.at("decreasing")).final_packing();
    BoundReport b = check_global_bound(p);
    CHECK(b.f + b.g + 1 == 16);
    CHECK(b.lower_bound == max(c.instance->total_area() / c.instance->width(), c.instance->max_height()));
    CHECK(b.ratio == b.bl_height / b.lower_bound);
    CHECK(b.unoccupied == c.instance->width() * b.bl_height - b.area);
    CHECK(b.pass);
    auto rect = std::make_shared<const Instance>(Instance::from_sizes(4, {{2, 1}}));
    CHECK_THROWS_AS(check_global_bound(pack(rect, Ordering::identity(1)).final_packing()), InvalidInput);
}
