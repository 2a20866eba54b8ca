#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "blpack/core.hpp"
#include "blpack/engine.hpp"

namespace blpack {

// ---- bottom-left verification ----------------------------------------------

struct BottomLeftViolation {
    std::size_t step = 0;  // 1-based
    ItemId id = 0;
    Position actual;
    Position expected;
};

struct BottomLeftReport {
    bool ok = true;
    std::vector<BottomLeftViolation> violations;
};

// Reference placement: scans y in {0} u {top faces}, then x in {0} u {right
// faces}, returning the first feasible corner.
Position candidate_grid_position(const Packing& prefix, const Item& item);
BottomLeftReport verify_bottom_left(const PackingTrace& trace);
// y = 0 or resting on a top face, and x = 0 or leaning on a right face.
bool has_support(const Packing& packing, ItemId id);

// ---- vertices of adjacency graphs ----------------------------------------

enum class Formal : std::uint8_t { none, left, right, bottom };

struct Vertex {
    Formal formal = Formal::none;
    ItemId id = 0;

    static Vertex item(ItemId id) { return {Formal::none, id}; }
    static Vertex left() { return {Formal::left, 0}; }
    static Vertex right() { return {Formal::right, 0}; }
    static Vertex bottom() { return {Formal::bottom, 0}; }
    bool is_formal() const { return formal != Formal::none; }
    std::string str() const;
    friend auto operator<=>(const Vertex&, const Vertex&) = default;
};

// tf is empty for the unbounded left and right boundaries.
struct VertexFaces {
    Rational lf, rf, bf;
    std::optional<Rational> tf;
};

enum ArrowType : std::uint8_t { kLeftType = 1, kRightType = 2, kUpType = 4, kDownType = 8 };
std::uint8_t arrow_types(const VertexFaces& from, const VertexFaces& to);
std::string arrow_types_str(std::uint8_t types);

// ---- pieces -------------------------------------------------------------

enum class PieceClass { left, middle, right };
std::string to_string(PieceClass c);

struct CellRect {
    Rational x0, x1, y0, y1;
};

struct Piece {
    std::size_t id = 0;
    std::size_t birth_step = 0;  // number of placed items when the piece became bounded
    PieceClass cls = PieceClass::middle;
    bool touches_left = false, touches_right = false;
    Faces faces;
    Rational area;              // frozen region
    Rational free_area_at_end;  // part never filled afterwards
    std::vector<std::uint32_t> cells;
};

// Compressed grid of a whole trace with piece labels. Cell (ix, iy) spans
// [xs[ix], xs[ix+1]] x [ys[iy], ys[iy+1]]; the last row lies above the packing.
class PieceMap {
public:
    explicit PieceMap(const PackingTrace& trace);

    const PackingTrace& trace() const { return trace_; }
    const Packing& packing() const { return final_; }
    const std::vector<Piece>& pieces() const { return pieces_; }

    std::size_t nx() const { return xs_.size() - 1; }
    std::size_t ny() const { return ys_.size() - 1; }
    const std::vector<Rational>& xs() const { return xs_; }
    const std::vector<Rational>& ys() const { return ys_; }
    std::uint32_t index(std::size_t ix, std::size_t iy) const { return static_cast<std::uint32_t>(iy * nx() + ix); }
    std::size_t ix(std::uint32_t c) const { return c % nx(); }
    std::size_t iy(std::uint32_t c) const { return c / nx(); }
    CellRect rect(std::uint32_t c) const;
    Rational cell_area(std::uint32_t c) const;

    // Placement step (1-based) of the item covering the cell; 0 when never covered.
    std::uint32_t fill_step(std::uint32_t c) const { return fill_[c]; }
    // Birth step of the piece containing the cell, or -1.
    std::int32_t birth(std::uint32_t c) const { return birth_[c]; }
    std::int32_t piece_of(std::uint32_t c) const { return piece_[c]; }

    // Owner of a (possibly out-of-strip) cell after `step` placements:
    // an item, a formal boundary square, or nothing.
    std::optional<Vertex> owner(long ix, long iy, std::size_t step) const;
    VertexFaces faces(const Vertex& v) const;
    bool adjacent(const Vertex& a, const Vertex& b) const;

    // Independent oracle: flood fill from above at the final state.
    Rational bounded_free_area_flood() const;
    Rational substrip_height() const { return substrip_; }

    static constexpr std::size_t kMaxCells = 40'000'000;

private:
    PackingTrace trace_;
    Packing final_;
    std::vector<Rational> xs_, ys_;
    std::vector<std::uint32_t> fill_;
    std::vector<std::int32_t> birth_;
    std::vector<std::int32_t> piece_;
    std::vector<Piece> pieces_;
    std::vector<std::size_t> step_of_;  // item id -> placement index
    Rational substrip_;
};

PieceMap extract_pieces(const PackingTrace& trace);

// ---- adjacency graph of a piece -----------------------------------------

struct Arrow {
    Vertex from, to;
    std::uint8_t types = 0;
};

struct PieceGraph {
    std::size_t piece = 0;
    std::vector<Vertex> vertices;  // sorted
    std::map<Vertex, VertexFaces> faces;
    std::map<Vertex, Rational> sizes;  // item widths
    std::vector<Arrow> arrows;         // all ordered adjacent pairs

    // Clockwise boundary order, rotated so the start square comes first.
    std::vector<Vertex> circuit;
    bool hamiltonian = false;
    std::vector<std::string> problems;
    std::size_t start = 0, pre = 0, top = 0, end = 0, pen = 0;  // circuit indices

    std::uint8_t types(std::size_t i, std::size_t j) const;  // arrow circuit[i] -> circuit[j]
    std::uint8_t types(const Vertex& a, const Vertex& b) const;
    const VertexFaces& f(std::size_t i) const { return faces.at(circuit[i]); }
    bool valid() const { return hamiltonian && problems.empty(); }
};

PieceGraph build_piece_graph(const PieceMap& map, std::size_t piece);

struct ClauseViolation {
    char clause = 'a';
    Vertex from, to;
    std::uint8_t types = 0;
};

struct StructureReport {
    bool ok = true;
    std::vector<ClauseViolation> violations;
    std::vector<std::string> problems;
};

StructureReport check_structure(const PieceGraph& pg);

struct PeakReport {
    bool ok = true;
    std::vector<Vertex> peaks;
    std::string problem;
};

PeakReport check_peaks(const PieceGraph& pg);

// ---- cover partitions ----------------------------------------------------

struct Subpiece {
    std::string label;  // "V1", "V2", ..., "V_end", "V_top"
    Vertex square;
    std::vector<std::uint32_t> cells;
    Rational width, height;
    bool connected = true;
    bool nested = true;
};

struct CoverPartition {
    std::size_t piece = 0;
    std::vector<Subpiece> subpieces;
    bool has_end = false;
    bool covers_piece = true;
    bool ok = true;
    std::vector<std::string> problems;
};

CoverPartition natural_cover_partition(const PieceMap& map, const PieceGraph& pg);

// Largest closed horizontal cross-section and the nested-lines property for a
// set of cells.
Rational line_width(const PieceMap& map, const std::vector<std::uint32_t>& cells);
bool nested_lines(const PieceMap& map, const std::vector<std::uint32_t>& cells);
bool cells_connected(const PieceMap& map, const std::vector<std::uint32_t>& cells);

struct WideCheck {
    std::string clause;   // "a", "b" or "c"
    std::string subject;  // subpiece label
    bool applicable = true;
    bool holds = true;
    Rational lhs, rhs;  // holds iff lhs > rhs
};

struct WideSquaresReport {
    bool applicable = true;
    bool ok = true;
    std::string reason;
    std::vector<WideCheck> checks;
};

WideSquaresReport check_wide_squares(const PieceMap& map, const CoverPartition& cp, const PieceGraph& pg, bool bottom_left);

// ---- trenches and global bound --------------------------------------------

struct Trench {
    std::vector<std::uint32_t> cells;
    Rational area;
    bool right = false;
};

struct TrenchReport {
    Rational substrip_height;
    std::vector<Trench> trenches;
    std::size_t right_trenches = 0;
    Rational item_area, piece_free_area, trench_area, open_area_above;
    bool measure_identity = true;
};

TrenchReport extract_trenches(const PieceMap& map);

struct BoundReport {
    Rational bl_height;
    Rational area, width, h_max;
    Rational lower_bound;  // max(area / W, h_max)
    Rational ratio;
    Rational unoccupied;   // W * h_BL - area
    int f = 12, g = 3;
    bool pass = false;
};

BoundReport check_global_bound(const Packing& packing);

// ---- whole-trace analysis --------------------------------------------------

struct PieceVerdict {
    Piece piece;
    PieceGraph graph;
    StructureReport structure;
    PeakReport peaks;
    CoverPartition cover;
    WideSquaresReport wide;
    bool ok() const;
};

struct AnalysisReport {
    BottomLeftReport bottom_left;
    std::vector<PieceVerdict> pieces;
    std::size_t exclusivity_violations = 0;
    Rational piece_free_area, flood_free_area;
    bool flood_agrees = true;
    TrenchReport trenches;
    std::optional<BoundReport> bound;
    bool ok() const;
};

AnalysisReport analyze(const PackingTrace& trace);

}  // namespace blpack
