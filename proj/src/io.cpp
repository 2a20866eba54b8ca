#include "blpack/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "blpack/parallel.hpp"

namespace blpack {

namespace {

Rational rat(const Json& j, const char* what) {
    if (j.is_string()) {
        if (auto q = Rational::try_parse(j.get<std::string>())) return *q;
    } else if (j.is_number_integer()) {
        return Rational(j.get<std::int64_t>());
    }
    throw InvalidInput(std::string("bad rational for '") + what + "'");
}

const Json& field(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("missing field '") + key + "'");
    return j.at(key);
}

std::string dec(const Rational& q) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", q.to_double());
    return buf;
}

}  // namespace

Json instance_to_json(const Instance& inst, const std::optional<InstanceMeta>& meta) {
    Json j;
    j["width"] = inst.width().str();
    Json items = Json::array();
    for (const Item& it : inst.items()) items.push_back({{"id", it.id}, {"w", it.w.str()}, {"h", it.h.str()}});
    j["items"] = std::move(items);
    if (meta) {
        Json params = Json::object();
        for (const auto& [k, v] : meta->params) params[k] = v;
        j["metadata"] = {{"construction", meta->construction}, {"params", params}};
    }
    return j;
}

Instance instance_from_json(const Json& j, InstanceMeta* meta) {
    const Json& items = field(j, "items");
    if (!items.is_array()) throw InvalidInput("'items' must be an array");
    std::vector<Item> v;
    for (const Json& it : items) {
        const Json& id = field(it, "id");
        if (!id.is_number_unsigned() && !id.is_number_integer()) throw InvalidInput("item id must be an integer");
        if (id.get<std::int64_t>() < 0) throw InvalidInput("negative item id");
        v.push_back({static_cast<ItemId>(id.get<std::int64_t>()), rat(field(it, "w"), "w"), rat(field(it, "h"), "h")});
    }
    if (meta && j.contains("metadata")) {
        const Json& m = j.at("metadata");
        if (m.contains("construction")) meta->construction = m.at("construction").get<std::string>();
        if (m.contains("params"))
            for (const auto& [k, val] : m.at("params").items()) meta->params[k] = val.is_string() ? val.get<std::string>() : val.dump();
    }
    return Instance(rat(field(j, "width"), "width"), std::move(v));
}

Json ordering_to_json(const Ordering& o) { return Json(o.ids()); }

Ordering ordering_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidInput("ordering must be an array of item ids");
    std::vector<ItemId> ids;
    for (const Json& x : j) {
        if (!x.is_number_integer() || x.get<std::int64_t>() < 0) throw InvalidInput("ordering entries must be non-negative integers");
        ids.push_back(static_cast<ItemId>(x.get<std::int64_t>()));
    }
    return Ordering(std::move(ids));
}

Json packing_to_json(const Packing& p) {
    Json j;
    j["instance"] = instance_to_json(p.instance());
    Json pl = Json::array();
    for (const Placement& q : p.placements()) pl.push_back({{"id", q.id}, {"x", q.x.str()}, {"y", q.y.str()}});
    j["placements"] = std::move(pl);
    j["height"] = p.height().str();
    return j;
}

Json trace_to_json(const PackingTrace& t) {
    Json j = packing_to_json(t.final_packing());
    j["ordering"] = ordering_to_json(t.ordering());
    return j;
}

Packing packing_from_json(const Json& j) {
    auto inst = std::make_shared<const Instance>(instance_from_json(field(j, "instance")));
    const Json& pl = field(j, "placements");
    if (!pl.is_array()) throw InvalidInput("'placements' must be an array");
    std::vector<Placement> v;
    for (const Json& q : pl) {
        const Json& id = field(q, "id");
        if (!id.is_number_integer() || id.get<std::int64_t>() < 0 || static_cast<std::size_t>(id.get<std::int64_t>()) >= inst->size())
            throw InvalidInput("placement id out of range");
        v.push_back({static_cast<ItemId>(id.get<std::int64_t>()), rat(field(q, "x"), "x"), rat(field(q, "y"), "y")});
    }
    Packing p(inst, std::move(v));
    if (j.contains("height") && rat(j.at("height"), "height") != p.height())
        throw InvalidInput("height field " + j.at("height").dump() + " does not match the placements (" + p.height().str() + ")");
    return p;
}

PackingTrace trace_from_json(const Json& j) {
    Packing p = packing_from_json(j);
    std::vector<ItemId> ids;
    for (const Placement& q : p.placements()) ids.push_back(q.id);
    Ordering ord;
    if (j.contains("ordering")) {
        ord = ordering_from_json(j.at("ordering"));
        if (ord.ids() != ids) throw InvalidInput("trace ordering does not match the placement order");
    } else {
        ord = Ordering(ids);
    }
    return PackingTrace(p.instance_ptr(), ord, p.placements());
}

Json to_json(const FeasibilityReport& r) {
    return {{"ok", r.ok}, {"violations", r.violations}};
}

Json to_json(const BottomLeftReport& r) {
    Json v = Json::array();
    for (const auto& x : r.violations)
        v.push_back({{"step", x.step},
                     {"id", x.id},
                     {"actual", {x.actual.x.str(), x.actual.y.str()}},
                     {"expected", {x.expected.x.str(), x.expected.y.str()}}});
    return {{"ok", r.ok}, {"violations", v}};
}

Json to_json(const PieceVerdict& v) {
    Json j;
    j["piece"] = v.piece.id;
    j["birth_step"] = v.piece.birth_step;
    j["class"] = to_string(v.piece.cls);
    j["area"] = v.piece.area.str();
    j["ok"] = v.ok();
    Json circ = Json::array();
    for (const Vertex& x : v.graph.circuit) circ.push_back(x.str());
    j["circuit"] = circ;
    j["hamiltonian"] = v.graph.hamiltonian;
    if (v.graph.valid()) {
        j["start"] = v.graph.circuit[v.graph.start].str();
        j["pre"] = v.graph.circuit[v.graph.pre].str();
        j["top"] = v.graph.circuit[v.graph.top].str();
        j["end"] = v.graph.circuit[v.graph.end].str();
        j["pen"] = v.graph.circuit[v.graph.pen].str();
    }
    j["graph_problems"] = v.graph.problems;
    Json sv = Json::array();
    for (const auto& c : v.structure.violations)
        sv.push_back({{"clause", std::string(1, c.clause)}, {"from", c.from.str()}, {"to", c.to.str()}, {"types", arrow_types_str(c.types)}});
    j["structure"] = {{"ok", v.structure.ok}, {"violations", sv}, {"problems", v.structure.problems}};
    Json peaks = Json::array();
    for (const Vertex& x : v.peaks.peaks) peaks.push_back(x.str());
    j["peaks"] = {{"ok", v.peaks.ok}, {"peaks", peaks}, {"problem", v.peaks.problem}};
    Json subs = Json::array();
    for (const Subpiece& s : v.cover.subpieces)
        subs.push_back({{"label", s.label},
                        {"square", s.square.str()},
                        {"width", s.width.str()},
                        {"height", s.height.str()},
                        {"connected", s.connected},
                        {"nested", s.nested}});
    j["cover"] = {{"ok", v.cover.ok}, {"covers_piece", v.cover.covers_piece}, {"subpieces", subs}, {"problems", v.cover.problems}};
    Json checks = Json::array();
    for (const WideCheck& c : v.wide.checks) {
        Json cj = {{"clause", c.clause}, {"subject", c.subject}, {"applicable", c.applicable}};
        if (c.applicable) {
            cj["holds"] = c.holds;
            cj["lhs"] = c.lhs.str();
            cj["rhs"] = c.rhs.str();
        }
        checks.push_back(cj);
    }
    j["wide_squares"] = {{"applicable", v.wide.applicable}, {"ok", v.wide.ok}, {"reason", v.wide.reason}, {"checks", checks}};
    return j;
}

Json to_json(const TrenchReport& r) {
    Json ts = Json::array();
    for (const Trench& t : r.trenches) ts.push_back({{"area", t.area.str()}, {"right", t.right}});
    return {{"substrip_height", r.substrip_height.str()},
            {"count", r.trenches.size()},
            {"right_trenches", r.right_trenches},
            {"trenches", ts},
            {"item_area", r.item_area.str()},
            {"piece_free_area", r.piece_free_area.str()},
            {"trench_area", r.trench_area.str()},
            {"open_area_above", r.open_area_above.str()},
            {"measure_identity", r.measure_identity}};
}

Json to_json(const BoundReport& r) {
    return {{"pass", r.pass},
            {"bl_height", r.bl_height.str()},
            {"area", r.area.str()},
            {"width", r.width.str()},
            {"h_max", r.h_max.str()},
            {"lower_bound", r.lower_bound.str()},
            {"ratio", r.ratio.str()},
            {"unoccupied", r.unoccupied.str()},
            {"f", r.f},
            {"g", r.g},
            {"factor", r.f + r.g + 1}};
}

Json to_json(const SearchResult& r) {
    return {{"height", r.height.str()}, {"ordering", ordering_to_json(r.ordering)}, {"orderings_examined", r.orderings_examined}};
}

Json to_json(const SearchTrace& t) {
    Json steps = Json::array();
    for (const SearchStep& s : t.steps) steps.push_back({{"height", s.height.str()}, {"ordering", ordering_to_json(s.ordering)}});
    return {{"strategy", to_string(t.strategy)},
            {"k", t.k},
            {"steps", t.step_count()},
            {"initial_height", t.steps.front().height.str()},
            {"final_height", t.final_step().height.str()},
            {"evaluations", t.evaluations},
            {"trace", steps}};
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

Json read_json(const std::string& path) {
    const std::string text = read_text(path);
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw InvalidInput(path + ": " + e.what());
    }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json(const std::string& path, const Json& j) { write_text(path, dump(j)); }

std::string render_svg(const Packing& p) {
    const Rational W = p.instance().width();
    Rational H = p.height();
    if (H.sign() == 0) H = W / 10;
    const double scale = 600.0 / W.to_double();
    std::ostringstream s;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", W.to_double() * scale);
    const std::string pw = buf;
    std::snprintf(buf, sizeof buf, "%.12g", H.to_double() * scale);
    const std::string ph = buf;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << pw << "\" height=\"" << ph << "\" viewBox=\"0 0 " << dec(W) << ' ' << dec(H)
      << "\">\n";
    // model y grows upward; flip so the strip bottom sits at the image bottom
    s << "<g transform=\"matrix(1 0 0 -1 0 " << dec(H) << ")\" stroke=\"black\" stroke-width=\"" << dec(W / 400) << "\">\n";
    for (std::size_t k = 0; k < p.size(); ++k) {
        const Placement& q = p.placements()[k];
        const Item& it = p.instance().item(q.id);
        s << "<rect x=\"" << dec(q.x) << "\" y=\"" << dec(q.y) << "\" width=\"" << dec(it.w) << "\" height=\"" << dec(it.h)
          << "\" fill=\"#c8d7ea\"><title>" << q.id << "</title></rect>\n";
    }
    s << "<polyline points=\"0," << dec(H) << " 0,0 " << dec(W) << ",0 " << dec(W) << ',' << dec(H) << "\" fill=\"none\" stroke-width=\""
      << dec(W / 150) << "\"/>\n";
    s << "</g>\n</svg>\n";
    return s.str();
}

RandomCase random_square_case(std::mt19937_64& rng) {
    const std::size_t n = 4 + uniform_below(rng, 9);
    std::vector<Rational> sizes;
    Rational mx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto num = static_cast<std::int64_t>(1 + uniform_below(rng, 20));
        const auto den = static_cast<std::int64_t>(1 + uniform_below(rng, 4));
        sizes.emplace_back(num, den);
        mx = max(mx, sizes.back());
    }
    const Rational W = mx * Rational(static_cast<std::int64_t>(4 + uniform_below(rng, 13)), 4);
    auto inst = std::make_shared<const Instance>(Instance::from_squares(W, sizes));
    std::vector<ItemId> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = static_cast<ItemId>(i);
    seeded_shuffle(ids, rng);
    return {inst, Ordering(std::move(ids))};
}

std::vector<RandomCase> random_corpus(std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<RandomCase> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_square_case(rng));
    return out;
}

}  // namespace blpack
