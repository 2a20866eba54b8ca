#include "blpack/analysis.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>

#include "blpack/parallel.hpp"

namespace blpack {

namespace {

constexpr std::uint32_t kNil = 0xffffffffu;
constexpr std::size_t kUnplaced = static_cast<std::size_t>(-1);

Faces box(const Rational& x, const Rational& y, const Item& it) { return {x, x + it.w, y, y + it.h}; }

bool feasible_at(const std::vector<Faces>& placed, const Rational& W, const Rational& x, const Rational& y, const Item& it) {
    if (x < 0 || y < 0 || x + it.w > W) return false;
    const Faces f = box(x, y, it);
    for (const Faces& p : placed)
        if (interiors_overlap(f, p)) return false;
    return true;
}

void sort_unique(std::vector<Rational>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::size_t locate(const std::vector<Rational>& v, const Rational& value) {
    return static_cast<std::size_t>(std::lower_bound(v.begin(), v.end(), value) - v.begin());
}

}  // namespace

// ---- bottom-left verification ----------------------------------------------

Position candidate_grid_position(const Packing& prefix, const Item& item) {
    const Rational& W = prefix.instance().width();
    std::vector<Faces> placed;
    std::vector<Rational> xs{Rational(0)}, ys{Rational(0)};
    for (std::size_t k = 0; k < prefix.size(); ++k) {
        placed.push_back(prefix.faces(k));
        xs.push_back(placed.back().rf);
        ys.push_back(placed.back().tf);
    }
    sort_unique(xs);
    sort_unique(ys);
    for (const Rational& y : ys)
        for (const Rational& x : xs)
            if (feasible_at(placed, W, x, y, item)) return {x, y};
    // unreachable: the top of the packing is always free
    throw std::logic_error("candidate grid exhausted");
}

BottomLeftReport verify_bottom_left(const PackingTrace& trace) {
    BottomLeftReport r;
    const auto& steps = trace.steps();
    std::vector<BottomLeftViolation> found(steps.size());
    std::vector<char> bad(steps.size(), 0);
    parallel_for(steps.size(), [&](std::size_t i) {
        const Packing prefix = trace.prefix(i);
        const Item& it = trace.instance().item(steps[i].id);
        const Position expected = candidate_grid_position(prefix, it);
        if (!(expected.x == steps[i].x && expected.y == steps[i].y)) {
            bad[i] = 1;
            found[i] = {i + 1, steps[i].id, {steps[i].x, steps[i].y}, expected};
        }
    }, 4);
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (bad[i]) r.violations.push_back(found[i]);
    r.ok = r.violations.empty();
    return r;
}

bool has_support(const Packing& packing, ItemId id) {
    std::size_t k = packing.size();
    for (std::size_t j = 0; j < packing.size(); ++j)
        if (packing.placements()[j].id == id) k = j;
    if (k == packing.size()) return false;
    const Faces f = packing.faces(k);
    bool below = f.bf == 0, left = f.lf == 0;
    for (std::size_t j = 0; j < packing.size() && !(below && left); ++j) {
        if (j == k) continue;
        const Faces g = packing.faces(j);
        if (!below && g.tf == f.bf && g.lf < f.rf && f.lf < g.rf) below = true;
        if (!left && g.rf == f.lf && g.bf < f.tf && f.bf < g.tf) left = true;
    }
    return below && left;
}

// ---- vertices ------------------------------------------------------------

std::string Vertex::str() const {
    switch (formal) {
        case Formal::left: return "LEFT";
        case Formal::right: return "RIGHT";
        case Formal::bottom: return "BOTTOM";
        case Formal::none: break;
    }
    return std::to_string(id);
}

std::uint8_t arrow_types(const VertexFaces& a, const VertexFaces& b) {
    std::uint8_t t = 0;
    if (a.lf == b.rf) t |= kLeftType;
    if (a.rf == b.lf) t |= kRightType;
    if (a.tf && *a.tf == b.bf) t |= kUpType;
    if (b.tf && a.bf == *b.tf) t |= kDownType;
    return t;
}

std::string arrow_types_str(std::uint8_t t) {
    std::string s;
    auto add = [&](std::uint8_t bit, const char* name) {
        if (!(t & bit)) return;
        if (!s.empty()) s += "+";
        s += name;
    };
    add(kLeftType, "left");
    add(kRightType, "right");
    add(kUpType, "up");
    add(kDownType, "down");
    return s.empty() ? "none" : s;
}

std::string to_string(PieceClass c) {
    switch (c) {
        case PieceClass::left: return "left";
        case PieceClass::middle: return "middle";
        case PieceClass::right: return "right";
    }
    return "?";
}

// ---- piece extraction ------------------------------------------------------

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent, head, tail, next;
    std::vector<std::uint8_t> top;

    explicit UnionFind(std::size_t n) : parent(n, kNil), head(n, kNil), tail(n, kNil), next(n, kNil), top(n, 0) {}

    void make(std::uint32_t c) {
        parent[c] = c;
        head[c] = tail[c] = c;
        next[c] = kNil;
        top[c] = 0;
    }
    bool live(std::uint32_t c) const { return parent[c] != kNil; }
    std::uint32_t find(std::uint32_t c) {
        std::uint32_t r = c;
        while (parent[r] != r) r = parent[r];
        while (parent[c] != r) {
            std::uint32_t n = parent[c];
            parent[c] = r;
            c = n;
        }
        return r;
    }
    // Marks the component of c as reaching the region above the packing;
    // returns its member list so the caller can stamp it.
    template <class F>
    void mark_top(std::uint32_t c, F&& on_bounded_members) {
        std::uint32_t r = find(c);
        if (top[r]) return;
        for (std::uint32_t m = head[r]; m != kNil; m = next[m]) on_bounded_members(m);
        top[r] = 1;
        head[r] = tail[r] = kNil;
    }
    template <class F>
    void unite(std::uint32_t a, std::uint32_t b, F&& on_bounded_members) {
        std::uint32_t ra = find(a), rb = find(b);
        if (ra == rb) return;
        if (top[ra] != top[rb]) {
            std::uint32_t bounded = top[ra] ? rb : ra;
            for (std::uint32_t m = head[bounded]; m != kNil; m = next[m]) on_bounded_members(m);
            head[bounded] = tail[bounded] = kNil;
            top[bounded] = 1;
        }
        // a and b now agree on top; splice lists
        if (!top[ra] && head[rb] != kNil) {
            if (head[ra] == kNil) {
                head[ra] = head[rb];
            } else {
                next[tail[ra]] = head[rb];
            }
            tail[ra] = tail[rb];
        }
        head[rb] = tail[rb] = kNil;
        parent[rb] = ra;
    }
};

}  // namespace

PieceMap::PieceMap(const PackingTrace& trace) : trace_(trace), final_(trace.final_packing()) {
    const Instance& inst = trace_.instance();
    const Rational& W = inst.width();
    const auto& steps = trace_.steps();
    const std::size_t n = steps.size();
    const Rational H = final_.height();
    Rational hmax = 0;
    for (const Placement& p : steps) hmax = max(hmax, inst.item(p.id).h);
    substrip_ = max(Rational(0), H - hmax);
    step_of_.assign(inst.size(), kUnplaced);
    for (std::size_t s = 0; s < n; ++s) step_of_[steps[s].id] = s;

    xs_ = {Rational(0), W};
    ys_ = {Rational(0), H, H + 1};
    if (substrip_ > 0) ys_.push_back(substrip_);
    for (const Placement& p : steps) {
        const Item& it = inst.item(p.id);
        xs_.push_back(p.x);
        xs_.push_back(p.x + it.w);
        ys_.push_back(p.y);
        ys_.push_back(p.y + it.h);
    }
    sort_unique(xs_);
    sort_unique(ys_);
    const std::size_t NX = nx(), NY = ny();
    if (NX * NY > kMaxCells) throw InvalidInput("packing too large for piece analysis (" + std::to_string(NX * NY) + " cells)");
    const std::size_t N = NX * NY;

    fill_.assign(N, 0);
    std::vector<std::vector<std::uint32_t>> by_step(n + 1);
    for (std::size_t s = 0; s < n; ++s) {
        const Item& it = inst.item(steps[s].id);
        const std::size_t x0 = locate(xs_, steps[s].x), x1 = locate(xs_, steps[s].x + it.w);
        const std::size_t y0 = locate(ys_, steps[s].y), y1 = locate(ys_, steps[s].y + it.h);
        for (std::size_t iy = y0; iy < y1; ++iy)
            for (std::size_t ix = x0; ix < x1; ++ix) {
                const std::uint32_t c = index(ix, iy);
                fill_[c] = static_cast<std::uint32_t>(s + 1);
                by_step[s + 1].push_back(c);
            }
    }

    // Reverse time: at time t the free cells are those filled after step t.
    // A bounded component that joins the open region when moving from t to
    // t-1 was born at step t.
    birth_.assign(N, -1);
    UnionFind uf(N);
    std::int32_t stamp = -1;
    // Cells freed at this very step were not part of any earlier component.
    auto assign = [&](std::uint32_t m) {
        if (stamp >= 0 && fill_[m] != static_cast<std::uint32_t>(stamp)) birth_[m] = stamp;
    };
    auto add = [&](std::uint32_t c) {
        uf.make(c);
        if (iy(c) == NY - 1) uf.mark_top(c, assign);
        const std::size_t x = ix(c), y = iy(c);
        if (x > 0 && uf.live(c - 1)) uf.unite(c, c - 1, assign);
        if (x + 1 < NX && uf.live(c + 1)) uf.unite(c, c + 1, assign);
        if (y > 0 && uf.live(c - NX)) uf.unite(c, static_cast<std::uint32_t>(c - NX), assign);
        if (y + 1 < NY && uf.live(c + NX)) uf.unite(c, static_cast<std::uint32_t>(c + NX), assign);
    };
    for (std::uint32_t c = 0; c < N; ++c)
        if (fill_[c] == 0) add(c);
    for (std::size_t t = n; t-- > 0;) {
        stamp = static_cast<std::int32_t>(t + 1);
        for (std::uint32_t c : by_step[t + 1]) add(c);
    }

    // Pieces: 4-connected components of equal birth.
    piece_.assign(N, -1);
    std::vector<std::uint32_t> order;
    for (std::uint32_t c = 0; c < N; ++c)
        if (birth_[c] >= 0) order.push_back(c);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return birth_[a] < birth_[b]; });
    for (std::uint32_t seed : order) {
        if (piece_[seed] >= 0) continue;
        Piece p;
        p.id = pieces_.size();
        p.birth_step = static_cast<std::size_t>(birth_[seed]);
        std::deque<std::uint32_t> q{seed};
        piece_[seed] = static_cast<std::int32_t>(p.id);
        while (!q.empty()) {
            const std::uint32_t c = q.front();
            q.pop_front();
            p.cells.push_back(c);
            const std::size_t x = ix(c), y = iy(c);
            auto visit = [&](std::uint32_t d) {
                if (piece_[d] < 0 && birth_[d] == birth_[seed]) {
                    piece_[d] = static_cast<std::int32_t>(p.id);
                    q.push_back(d);
                }
            };
            if (x > 0) visit(c - 1);
            if (x + 1 < NX) visit(c + 1);
            if (y > 0) visit(static_cast<std::uint32_t>(c - NX));
            if (y + 1 < NY) visit(static_cast<std::uint32_t>(c + NX));
        }
        std::sort(p.cells.begin(), p.cells.end());
        bool first = true;
        for (std::uint32_t c : p.cells) {
            const CellRect r = rect(c);
            const Rational a = cell_area(c);
            p.area += a;
            if (fill_[c] == 0) p.free_area_at_end += a;
            if (ix(c) == 0) p.touches_left = true;
            if (ix(c) + 1 == NX) p.touches_right = true;
            if (first) {
                p.faces = {r.x0, r.x1, r.y0, r.y1};
                first = false;
            } else {
                p.faces.lf = min(p.faces.lf, r.x0);
                p.faces.rf = max(p.faces.rf, r.x1);
                p.faces.bf = min(p.faces.bf, r.y0);
                p.faces.tf = max(p.faces.tf, r.y1);
            }
        }
        p.cls = p.touches_left ? PieceClass::left : p.touches_right ? PieceClass::right : PieceClass::middle;
        pieces_.push_back(std::move(p));
    }
}

CellRect PieceMap::rect(std::uint32_t c) const {
    const std::size_t x = ix(c), y = iy(c);
    return {xs_[x], xs_[x + 1], ys_[y], ys_[y + 1]};
}

Rational PieceMap::cell_area(std::uint32_t c) const {
    const CellRect r = rect(c);
    return (r.x1 - r.x0) * (r.y1 - r.y0);
}

std::optional<Vertex> PieceMap::owner(long x, long y, std::size_t step) const {
    const long NX = static_cast<long>(nx()), NY = static_cast<long>(ny());
    const bool out_x = x < 0 || x >= NX;
    if (out_x && y < 0) return std::nullopt;
    if (x < 0) return Vertex::left();
    if (x >= NX) return Vertex::right();
    if (y < 0) return Vertex::bottom();
    if (y >= NY) return std::nullopt;
    const std::uint32_t s = fill_[index(static_cast<std::size_t>(x), static_cast<std::size_t>(y))];
    if (s == 0 || s > step) return std::nullopt;
    return Vertex::item(trace_.steps()[s - 1].id);
}

VertexFaces PieceMap::faces(const Vertex& v) const {
    const Rational& W = trace_.instance().width();
    switch (v.formal) {
        case Formal::left: return {0, 0, 0, std::nullopt};
        case Formal::right: return {W, W, 0, std::nullopt};
        case Formal::bottom: return {0, W, 0, Rational(0)};
        case Formal::none: break;
    }
    if (v.id >= step_of_.size() || step_of_[v.id] == kUnplaced) throw InvalidInput("item " + std::to_string(v.id) + " is not placed");
    const Placement& p = trace_.steps()[step_of_[v.id]];
    const Item& it = trace_.instance().item(p.id);
    return {p.x, p.x + it.w, p.y, p.y + it.h};
}

bool PieceMap::adjacent(const Vertex& a, const Vertex& b) const {
    if (a == b) return false;
    if (a.is_formal() && b.is_formal()) {
        // LEFT and RIGHT never meet; each meets BOTTOM at a corner.
        return a.formal == Formal::bottom || b.formal == Formal::bottom;
    }
    if (b.is_formal()) return adjacent(b, a);
    const VertexFaces fb = faces(b);
    const Rational& W = trace_.instance().width();
    switch (a.formal) {
        case Formal::left: return fb.lf == 0;
        case Formal::right: return fb.rf == W;
        case Formal::bottom: return fb.bf == 0;
        case Formal::none: break;
    }
    const VertexFaces fa = faces(a);
    return fa.lf <= fb.rf && fb.lf <= fa.rf && fa.bf <= *fb.tf && fb.bf <= *fa.tf;
}

Rational PieceMap::bounded_free_area_flood() const {
    const std::size_t NX = nx(), NY = ny(), N = NX * NY;
    std::vector<std::uint8_t> seen(N, 0);
    std::deque<std::uint32_t> q;
    for (std::size_t x = 0; x < NX; ++x) {
        const std::uint32_t c = index(x, NY - 1);
        seen[c] = 1;
        q.push_back(c);
    }
    while (!q.empty()) {
        const std::uint32_t c = q.front();
        q.pop_front();
        const std::size_t x = ix(c), y = iy(c);
        auto visit = [&](std::uint32_t d) {
            if (!seen[d] && fill_[d] == 0) {
                seen[d] = 1;
                q.push_back(d);
            }
        };
        if (x > 0) visit(c - 1);
        if (x + 1 < NX) visit(c + 1);
        if (y > 0) visit(static_cast<std::uint32_t>(c - NX));
        if (y + 1 < NY) visit(static_cast<std::uint32_t>(c + NX));
    }
    Rational area = 0;
    for (std::uint32_t c = 0; c < N; ++c)
        if (fill_[c] == 0 && !seen[c]) area += cell_area(c);
    return area;
}

PieceMap extract_pieces(const PackingTrace& trace) { return PieceMap(trace); }

// ---- adjacency graph and circuit ---------------------------------------------

std::uint8_t PieceGraph::types(std::size_t i, std::size_t j) const { return types(circuit[i], circuit[j]); }

std::uint8_t PieceGraph::types(const Vertex& a, const Vertex& b) const {
    for (const Arrow& ar : arrows)
        if (ar.from == a && ar.to == b) return ar.types;
    return 0;
}

PieceGraph build_piece_graph(const PieceMap& map, std::size_t piece_index) {
    const Piece& piece = map.pieces().at(piece_index);
    const std::size_t step = piece.birth_step;
    PieceGraph pg;
    pg.piece = piece_index;

    std::set<std::uint32_t> in_piece(piece.cells.begin(), piece.cells.end());
    auto inside = [&](long x, long y) {
        if (x < 0 || y < 0 || x >= static_cast<long>(map.nx()) || y >= static_cast<long>(map.ny())) return false;
        return in_piece.count(map.index(static_cast<std::size_t>(x), static_cast<std::size_t>(y))) > 0;
    };

    // Vertices: owners of every cell whose closure meets a piece cell.
    std::set<Vertex> verts;
    for (std::uint32_t c : piece.cells) {
        const long x = static_cast<long>(map.ix(c)), y = static_cast<long>(map.iy(c));
        for (long dy = -1; dy <= 1; ++dy)
            for (long dx = -1; dx <= 1; ++dx) {
                if (inside(x + dx, y + dy)) continue;
                if (auto o = map.owner(x + dx, y + dy, step)) verts.insert(*o);
            }
    }
    pg.vertices.assign(verts.begin(), verts.end());
    for (const Vertex& v : pg.vertices) {
        pg.faces.emplace(v, map.faces(v));
        if (!v.is_formal()) pg.sizes.emplace(v, map.trace().instance().item(v.id).w);
    }
    for (const Vertex& a : pg.vertices)
        for (const Vertex& b : pg.vertices)
            if (map.adjacent(a, b)) pg.arrows.push_back({a, b, arrow_types(pg.faces.at(a), pg.faces.at(b))});

    // Directed boundary edges with the piece on the right. Directions: 0 N, 1 E, 2 S, 3 W.
    struct Edge {
        long x, y;  // tail vertex
        int dir;
    };
    static constexpr long kDx[4] = {0, 1, 0, -1}, kDy[4] = {1, 0, -1, 0};
    std::map<std::pair<long, long>, std::vector<std::size_t>> out;
    std::vector<Edge> edges;
    auto emit = [&](long x, long y, int dir) {
        out[{x, y}].push_back(edges.size());
        edges.push_back({x, y, dir});
    };
    for (std::uint32_t c : piece.cells) {
        const long x = static_cast<long>(map.ix(c)), y = static_cast<long>(map.iy(c));
        if (!inside(x, y - 1)) emit(x + 1, y, 3);
        if (!inside(x - 1, y)) emit(x, y, 0);
        if (!inside(x, y + 1)) emit(x, y + 1, 1);
        if (!inside(x + 1, y)) emit(x + 1, y + 1, 2);
    }
    // Cell to the left of an edge, and the diagonal cell ahead-left of a vertex.
    auto outside_cell = [&](const Edge& e) -> std::pair<long, long> {
        switch (e.dir) {
            case 0: return {e.x - 1, e.y};
            case 1: return {e.x, e.y};
            case 2: return {e.x, e.y - 1};
            default: return {e.x - 1, e.y - 1};
        }
    };
    auto diagonal_cell = [&](long vx, long vy, int dir) -> std::pair<long, long> {
        switch (dir) {
            case 0: return {vx - 1, vy};
            case 1: return {vx, vy};
            case 2: return {vx, vy - 1};
            default: return {vx - 1, vy - 1};
        }
    };

    // Start on the bottom edge of the lowest, then leftmost, cell: always on the outer boundary.
    const std::uint32_t first = *std::min_element(piece.cells.begin(), piece.cells.end());
    std::size_t start_edge = edges.size();
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (edges[i].dir == 3 && edges[i].x == static_cast<long>(map.ix(first)) + 1 && edges[i].y == static_cast<long>(map.iy(first)))
            start_edge = i;
    std::vector<Vertex> walk;
    std::vector<char> used(edges.size(), 0);
    std::size_t cur = start_edge, traversed = 0;
    while (true) {
        used[cur] = 1;
        ++traversed;
        const Edge& e = edges[cur];
        auto [ox, oy] = outside_cell(e);
        if (auto o = map.owner(ox, oy, step)) {
            walk.push_back(*o);
        } else {
            pg.problems.push_back("boundary edge without an owning square");
        }
        const long hx = e.x + kDx[e.dir], hy = e.y + kDy[e.dir];
        const auto& cand = out[{hx, hy}];
        std::size_t next = edges.size();
        for (int turn : {1, 0, 3}) {
            const int want = (e.dir + turn) % 4;
            for (std::size_t k : cand)
                if (edges[k].dir == want && (!used[k] || k == start_edge)) {
                    next = k;
                    break;
                }
            if (next != edges.size()) {
                if (turn == 1) {
                    auto [dx, dy] = diagonal_cell(hx, hy, e.dir);
                    if (auto o = map.owner(dx, dy, step)) walk.push_back(*o);
                }
                break;
            }
        }
        if (next == edges.size()) {
            pg.problems.push_back("boundary walk does not close");
            break;
        }
        if (next == start_edge) break;
        cur = next;
    }
    if (traversed != edges.size()) pg.problems.push_back("piece boundary has more than one component");

    // Collapse repeats of consecutive owners, including around the wrap.
    std::vector<Vertex> circ;
    for (const Vertex& v : walk)
        if (circ.empty() || circ.back() != v) circ.push_back(v);
    while (circ.size() > 1 && circ.front() == circ.back()) circ.pop_back();

    std::set<Vertex> seen(circ.begin(), circ.end());
    pg.hamiltonian = seen.size() == circ.size() && seen == verts;
    for (std::size_t i = 0; i < circ.size() && pg.hamiltonian; ++i)
        if (!map.adjacent(circ[i], circ[(i + 1) % circ.size()])) pg.hamiltonian = false;
    if (!pg.hamiltonian) pg.problems.push_back("boundary walk is not a Hamiltonian circuit");
    if (verts.size() < 4) pg.problems.push_back("fewer than four adjacent squares");

    if (circ.empty()) {
        pg.problems.push_back("empty circuit");
        return pg;
    }
    // start: lowest top face, then leftmost
    auto lower_top = [&](const Vertex& a, const Vertex& b) {
        const VertexFaces &fa = pg.faces.at(a), &fb = pg.faces.at(b);
        if (fa.tf.has_value() != fb.tf.has_value()) return fa.tf.has_value();
        if (fa.tf && *fa.tf != *fb.tf) return *fa.tf < *fb.tf;
        return fa.lf < fb.lf;
    };
    const auto start_it = std::min_element(circ.begin(), circ.end(), lower_top);
    std::rotate(circ.begin(), start_it, circ.end());
    pg.circuit = circ;
    const std::size_t L = circ.size();
    // top: highest bottom face, then rightmost
    std::size_t top = 0;
    for (std::size_t i = 1; i < L; ++i) {
        const VertexFaces &fi = pg.f(i), &ft = pg.f(top);
        if (fi.bf > ft.bf || (fi.bf == ft.bf && fi.lf > ft.lf)) top = i;
    }
    pg.start = 0;
    pg.top = top;
    pg.end = (top + 1) % L;
    pg.pre = (top + L - 1) % L;
    pg.pen = (top + 2) % L;
    if (L < 4) pg.problems.push_back("circuit shorter than four");
    if (top == 0) pg.problems.push_back("top square coincides with start square");
    if (pg.end == 0) pg.problems.push_back("end square coincides with start square");
    return pg;
}

StructureReport check_structure(const PieceGraph& pg) {
    StructureReport r;
    const std::size_t L = pg.circuit.size();
    if (!pg.valid() || L < 4) {
        r.ok = false;
        r.problems.push_back("no valid circuit");
        return r;
    }
    const std::size_t T = pg.top;
    auto need = [&](char clause, std::size_t i, std::size_t j, std::uint8_t allowed) {
        const std::uint8_t t = pg.types(i % L, j % L);
        if (!(t & allowed)) r.violations.push_back({clause, pg.circuit[i % L], pg.circuit[j % L], t});
    };
    for (std::size_t j = 0; j + 2 <= T && T >= 2; ++j) need('a', j, j + 1, kLeftType | kUpType);
    need('b', T - 1, T, kRightType | kUpType);
    need('c', T, T + 1, kRightType | kDownType);
    for (std::size_t j = L; j >= T + 3; --j) need('d', j, j - 1, kRightType | kDownType);
    need('e', T + 2, T + 1, kRightType | kUpType);
    r.ok = r.violations.empty();
    return r;
}

PeakReport check_peaks(const PieceGraph& pg) {
    PeakReport r;
    const std::size_t L = pg.circuit.size();
    if (!pg.valid() || L < 4) {
        r.ok = false;
        r.problem = "no valid circuit";
        return r;
    }
    std::vector<Rational> bf;
    for (std::size_t i = 0; i <= L; ++i) bf.push_back(pg.f(i % L).bf);
    for (std::size_t i = 0; i <= L; ++i) {
        std::optional<std::size_t> k, j;
        for (std::size_t a = i; a-- > 0;)
            if (bf[a] != bf[i]) {
                k = a;
                break;
            }
        for (std::size_t b = i + 1; b <= L; ++b)
            if (bf[b] != bf[i]) {
                j = b;
                break;
            }
        if (k && j && bf[*k] < bf[i] && bf[*j] < bf[i]) {
            const Vertex v = pg.circuit[i % L];
            if (std::find(r.peaks.begin(), r.peaks.end(), v) == r.peaks.end()) r.peaks.push_back(v);
        }
    }
    const Vertex top = pg.circuit[pg.top], pre = pg.circuit[pg.pre];
    if (r.peaks.size() > 2) {
        r.ok = false;
        r.problem = "more than two peak squares";
    }
    for (const Vertex& v : r.peaks)
        if (v != top && v != pre) {
            r.ok = false;
            r.problem = "peak square " + v.str() + " is neither the top nor the pre-top square";
        }
    return r;
}

// ---- cover partition -------------------------------------------------------

namespace {

using Run = std::pair<std::size_t, std::size_t>;  // closed range of x breakpoint indices

std::vector<Run> merge_runs(std::vector<Run> runs) {
    std::sort(runs.begin(), runs.end());
    std::vector<Run> out;
    for (const Run& r : runs) {
        if (!out.empty() && r.first <= out.back().second) {
            out.back().second = std::max(out.back().second, r.second);
        } else {
            out.push_back(r);
        }
    }
    return out;
}

// Cross-sections of the closure, bottom to top: breakpoint, row interior, breakpoint, ...
std::vector<std::vector<Run>> levels(const PieceMap& map, const std::vector<std::uint32_t>& cells) {
    std::map<std::size_t, std::vector<Run>> rows;
    for (std::uint32_t c : cells) rows[map.iy(c)].push_back({map.ix(c), map.ix(c) + 1});
    std::vector<std::vector<Run>> out;
    if (rows.empty()) return out;
    const std::size_t lo = rows.begin()->first, hi = rows.rbegin()->first;
    auto row = [&](std::size_t y) -> std::vector<Run> {
        auto it = rows.find(y);
        return it == rows.end() ? std::vector<Run>{} : merge_runs(it->second);
    };
    for (std::size_t y = lo; y <= hi + 1; ++y) {
        std::vector<Run> at = y > lo ? row(y - 1) : std::vector<Run>{};
        if (y <= hi) {
            auto above = row(y);
            at.insert(at.end(), above.begin(), above.end());
        }
        out.push_back(merge_runs(at));
        if (y <= hi) out.push_back(row(y));
    }
    return out;
}

}  // namespace

Rational line_width(const PieceMap& map, const std::vector<std::uint32_t>& cells) {
    Rational w = 0;
    for (const auto& level : levels(map, cells))
        for (const Run& r : level) w = max(w, map.xs()[r.second] - map.xs()[r.first]);
    return w;
}

bool nested_lines(const PieceMap& map, const std::vector<std::uint32_t>& cells) {
    const auto lv = levels(map, cells);
    for (std::size_t a = 0; a < lv.size(); ++a)
        for (std::size_t b = a + 1; b < lv.size(); ++b)
            for (const Run& lower : lv[a])
                for (const Run& upper : lv[b]) {
                    const bool meet = lower.first <= upper.second && upper.first <= lower.second;
                    const bool inside = upper.first <= lower.first && lower.second <= upper.second;
                    if (meet && !inside) return false;
                }
    return true;
}

bool cells_connected(const PieceMap& map, const std::vector<std::uint32_t>& cells) {
    if (cells.empty()) return true;
    std::set<std::uint32_t> all(cells.begin(), cells.end()), seen{cells.front()};
    std::deque<std::uint32_t> q{cells.front()};
    const std::size_t NX = map.nx();
    while (!q.empty()) {
        const std::uint32_t c = q.front();
        q.pop_front();
        const std::size_t x = map.ix(c);
        std::vector<std::uint32_t> nb;
        if (x > 0) nb.push_back(c - 1);
        if (x + 1 < NX) nb.push_back(c + 1);
        if (c >= NX) nb.push_back(static_cast<std::uint32_t>(c - NX));
        nb.push_back(static_cast<std::uint32_t>(c + NX));
        for (std::uint32_t d : nb)
            if (all.count(d) && seen.insert(d).second) q.push_back(d);
    }
    return seen.size() == all.size();
}

CoverPartition natural_cover_partition(const PieceMap& map, const PieceGraph& pg) {
    CoverPartition cp;
    cp.piece = pg.piece;
    const std::size_t L = pg.circuit.size();
    if (!pg.valid() || L < 4) {
        cp.ok = false;
        cp.covers_piece = false;
        cp.problems.push_back("no valid circuit");
        return cp;
    }
    const Piece& piece = map.pieces().at(pg.piece);
    const std::size_t T = pg.top;
    // P runs from the end square around through the start square to the top square.
    std::vector<std::size_t> P;
    for (std::size_t q = 0; q < L; ++q) P.push_back((T + 1 + q) % L);

    struct Seed {
        Rational bf;
        std::size_t order;
        std::size_t circuit_index;
        bool is_end;
    };
    std::vector<Seed> seeds;
    cp.has_end = (pg.types(pg.end, pg.pen) & kDownType) != 0;
    if (cp.has_end) seeds.push_back({pg.f(pg.end).bf, 0, pg.end, true});
    for (std::size_t q = 1; q + 1 < P.size(); ++q) {
        const VertexFaces &cur = pg.f(P[q]), &prev = pg.f(P[q - 1]);
        if (cur.rf > prev.rf && (pg.types(P[q - 1], P[q]) & kUpType)) seeds.push_back({cur.bf, q, P[q], false});
    }
    std::stable_sort(seeds.begin(), seeds.end(), [](const Seed& a, const Seed& b) { return a.bf < b.bf; });

    std::set<std::uint32_t> free_cells(piece.cells.begin(), piece.cells.end());
    const std::size_t NX = map.nx();
    auto grow = [&](const VertexFaces& sq, bool capped) {
        std::vector<std::uint32_t> got;
        std::deque<std::uint32_t> q;
        for (std::uint32_t c : free_cells) {
            const CellRect r = map.rect(c);
            if (r.y1 == sq.bf && r.x0 < sq.rf && sq.lf < r.x1) q.push_back(c);
        }
        for (std::uint32_t c : q) free_cells.erase(c);
        while (!q.empty()) {
            const std::uint32_t c = q.front();
            q.pop_front();
            got.push_back(c);
            const std::size_t x = map.ix(c);
            std::vector<std::uint32_t> nb;
            if (x > 0) nb.push_back(c - 1);
            if (x + 1 < NX) nb.push_back(c + 1);
            if (c >= NX) nb.push_back(static_cast<std::uint32_t>(c - NX));
            nb.push_back(static_cast<std::uint32_t>(c + NX));
            for (std::uint32_t d : nb) {
                if (!free_cells.count(d)) continue;
                if (capped && map.rect(d).y1 > sq.bf) continue;
                free_cells.erase(d);
                q.push_back(d);
            }
        }
        std::sort(got.begin(), got.end());
        return got;
    };
    auto finish = [&](Subpiece sp) {
        if (sp.cells.empty()) return;
        sp.width = line_width(map, sp.cells);
        Rational lo = map.rect(sp.cells.front()).y0, hi = lo;
        for (std::uint32_t c : sp.cells) {
            lo = min(lo, map.rect(c).y0);
            hi = max(hi, map.rect(c).y1);
        }
        sp.height = hi - lo;
        sp.connected = cells_connected(map, sp.cells);
        sp.nested = nested_lines(map, sp.cells);
        if (!sp.connected) cp.problems.push_back(sp.label + " is not connected");
        if (!sp.nested) cp.problems.push_back(sp.label + " violates the nested-lines property");
        cp.subpieces.push_back(std::move(sp));
    };
    std::size_t label = 0;
    for (const Seed& s : seeds) {
        Subpiece sp;
        sp.square = pg.circuit[s.circuit_index];
        sp.label = s.is_end ? "V_end" : "V" + std::to_string(++label);
        sp.cells = grow(pg.f(s.circuit_index), true);
        finish(std::move(sp));
    }
    Subpiece top;
    top.square = pg.circuit[T];
    top.label = "V_top";
    top.cells = grow(pg.f(T), false);
    finish(std::move(top));
    if (!free_cells.empty()) {
        cp.covers_piece = false;
        cp.problems.push_back(std::to_string(free_cells.size()) + " piece cells outside every subpiece");
    }
    cp.ok = cp.problems.empty();
    return cp;
}

WideSquaresReport check_wide_squares(const PieceMap& map, const CoverPartition& cp, const PieceGraph& pg, bool bottom_left) {
    WideSquaresReport r;
    if (!bottom_left) {
        r.applicable = false;
        r.reason = "packing is not bottom-left";
        return r;
    }
    if (!map.trace().instance().squares_only()) {
        r.applicable = false;
        r.reason = "instance has non-square items";
        return r;
    }
    if (!pg.valid() || !cp.ok) {
        r.applicable = false;
        r.ok = false;
        r.reason = "no valid cover partition";
        return r;
    }
    auto size_of = [&](const Vertex& v) -> std::optional<Rational> {
        if (v.is_formal()) return std::nullopt;
        return pg.sizes.at(v);
    };
    const Subpiece* v_end = nullptr;
    for (const Subpiece& sp : cp.subpieces) {
        if (sp.label == "V_end") {
            v_end = &sp;
            continue;
        }
        WideCheck c;
        c.clause = "a";
        c.subject = sp.label;
        if (auto s = size_of(sp.square)) {
            c.lhs = *s;
            c.rhs = sp.width;
            c.holds = c.lhs > c.rhs;
        } else {
            c.applicable = false;
        }
        r.checks.push_back(c);
    }
    // a formal end (right pieces) has no V_end and no real size, so (b) and (c) do not apply
    if (!pg.circuit[pg.end].is_formal() && (pg.types(pg.pen, pg.end) & kUpType)) {
        WideCheck b;
        b.clause = "b";
        b.subject = "pre-top";
        if (auto s = size_of(pg.circuit[pg.pre])) {
            b.lhs = *s;
            b.rhs = pg.f(pg.top).bf - pg.f(pg.end).bf;
            b.holds = b.lhs > b.rhs;
        } else {
            b.applicable = false;
        }
        r.checks.push_back(b);
        WideCheck c;
        c.clause = "c";
        c.subject = "top";
        const Vertex pen = pg.circuit[pg.pen];
        std::optional<Rational> pen_size = pen.formal == Formal::bottom ? std::optional<Rational>(Rational(0)) : size_of(pen);
        auto top_size = size_of(pg.circuit[pg.top]);
        if (pen_size && top_size) {
            c.lhs = *top_size;
            c.rhs = *pen_size + (v_end ? v_end->width : Rational(0));
            c.holds = c.lhs > c.rhs;
        } else {
            c.applicable = false;
        }
        r.checks.push_back(c);
    }
    for (const WideCheck& c : r.checks)
        if (c.applicable && !c.holds) r.ok = false;
    return r;
}

// ---- trenches and bound ------------------------------------------------------

TrenchReport extract_trenches(const PieceMap& map) {
    TrenchReport r;
    r.substrip_height = map.substrip_height();
    const std::size_t NX = map.nx(), NY = map.ny(), N = NX * NY;
    const Rational H = map.packing().height();
    for (const Placement& p : map.packing().placements()) {
        const Item& it = map.trace().instance().item(p.id);
        r.item_area += it.w * it.h;
    }
    std::vector<std::uint8_t> seen(N, 0);
    for (std::uint32_t c = 0; c < N; ++c) {
        const CellRect rc = map.rect(c);
        if (rc.y1 > H || map.fill_step(c) != 0) continue;
        if (map.birth(c) >= 0) {
            r.piece_free_area += map.cell_area(c);
            continue;
        }
        if (rc.y1 > r.substrip_height) {
            r.open_area_above += map.cell_area(c);
            continue;
        }
        if (seen[c]) continue;
        Trench t;
        std::deque<std::uint32_t> q{c};
        seen[c] = 1;
        while (!q.empty()) {
            const std::uint32_t d = q.front();
            q.pop_front();
            t.cells.push_back(d);
            t.area += map.cell_area(d);
            const std::size_t x = map.ix(d), y = map.iy(d);
            if (x + 1 == NX) t.right = true;
            std::vector<std::uint32_t> nb;
            if (x > 0) nb.push_back(d - 1);
            if (x + 1 < NX) nb.push_back(d + 1);
            if (y > 0) nb.push_back(static_cast<std::uint32_t>(d - NX));
            if (y + 1 < NY) nb.push_back(static_cast<std::uint32_t>(d + NX));
            for (std::uint32_t e : nb) {
                if (seen[e] || map.fill_step(e) != 0 || map.birth(e) >= 0) continue;
                if (map.rect(e).y1 > r.substrip_height) continue;
                seen[e] = 1;
                q.push_back(e);
            }
        }
        std::sort(t.cells.begin(), t.cells.end());
        r.trench_area += t.area;
        if (t.right) ++r.right_trenches;
        r.trenches.push_back(std::move(t));
    }
    const Rational total = map.trace().instance().width() * H;
    r.measure_identity = r.item_area + r.piece_free_area + r.trench_area + r.open_area_above == total;
    return r;
}

BoundReport check_global_bound(const Packing& packing) {
    const Instance& inst = packing.instance();
    if (!inst.squares_only()) throw InvalidInput("the global bound check applies to squares only");
    BoundReport b;
    b.bl_height = packing.height();
    b.width = inst.width();
    for (const Placement& p : packing.placements()) {
        const Item& it = inst.item(p.id);
        b.area += it.w * it.h;
        b.h_max = max(b.h_max, it.h);
    }
    b.lower_bound = max(b.area / b.width, b.h_max);
    b.ratio = b.lower_bound > 0 ? b.bl_height / b.lower_bound : Rational(0);
    b.unoccupied = b.width * b.bl_height - b.area;
    b.pass = b.bl_height <= Rational(b.f + b.g + 1) * b.lower_bound;
    return b;
}

// ---- whole trace -------------------------------------------------------------

bool PieceVerdict::ok() const {
    return graph.valid() && structure.ok && peaks.ok && cover.ok && wide.ok && !(piece.touches_left && piece.touches_right);
}

bool AnalysisReport::ok() const {
    if (!bottom_left.ok || !flood_agrees || exclusivity_violations > 0 || !trenches.measure_identity) return false;
    if (bound && !bound->pass) return false;
    for (const PieceVerdict& v : pieces)
        if (!v.ok()) return false;
    return true;
}

AnalysisReport analyze(const PackingTrace& trace) {
    AnalysisReport rep;
    rep.bottom_left = verify_bottom_left(trace);
    const PieceMap map(trace);
    const auto& pieces = map.pieces();
    rep.pieces.resize(pieces.size());
    parallel_for(pieces.size(), [&](std::size_t i) {
        PieceVerdict& v = rep.pieces[i];
        v.piece = pieces[i];
        v.graph = build_piece_graph(map, i);
        v.structure = check_structure(v.graph);
        v.peaks = check_peaks(v.graph);
        v.cover = natural_cover_partition(map, v.graph);
        v.wide = check_wide_squares(map, v.cover, v.graph, rep.bottom_left.ok);
    }, 1);
    for (const Piece& p : pieces) {
        if (p.touches_left && p.touches_right) ++rep.exclusivity_violations;
        rep.piece_free_area += p.free_area_at_end;
    }
    rep.flood_free_area = map.bounded_free_area_flood();
    rep.flood_agrees = rep.flood_free_area == rep.piece_free_area;
    rep.trenches = extract_trenches(map);
    if (trace.instance().squares_only() && trace.final_packing().complete()) rep.bound = check_global_bound(trace.final_packing());
    return rep;
}

}  // namespace blpack
