#include "blpack/repro.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <tuple>

#include "blpack/parallel.hpp"

namespace blpack {

namespace {

using Clock = std::chrono::steady_clock;

// feasible, complete, and exactly at the stated height
Json check_reference(const GeneratedCase& c, const std::string& key, const Rational& want, bool& ok) {
    const Packing& p = c.reference_packings.at(key);
    FeasibilityReport f = feasible(p);
    const bool hit = f.ok && p.complete() && p.height() == want;
    ok = ok && hit;
    return {{"reference", key}, {"feasible", f.ok}, {"complete", p.complete()}, {"height", p.height().str()}, {"want", want.str()}, {"ok", hit}};
}

using Layout = std::vector<std::tuple<Rational, Rational, Rational>>;  // size, x, y

Layout layout_of(const Packing& p) {
    Layout v;
    for (const Placement& q : p.placements()) v.emplace_back(p.instance().item(q.id).w, q.x, q.y);
    std::sort(v.begin(), v.end());
    return v;
}

CriterionResult c1_rect43() {
    CriterionResult r{1, "rect43 best order", true, Json::object()};
    GeneratedCase c = gen_rect_43(Rational(1, 100));
    SearchResult best = best_exhaustive(c.instance);
    const Rational opt = c.reference_packings.at("opt").height();
    const bool best_ok = best.height == 4 && best.orderings_examined == 5040;
    r.details["best"] = to_json(best);
    r.details["opt_reference"] = check_reference(c, "opt", Rational(301, 100), r.pass);
    const Rational ratio = best.height / opt;
    r.details["ratio"] = ratio.str();
    r.details["ratio_above_5_4"] = ratio > Rational(5, 4);
    r.pass = r.pass && best_ok && ratio == Rational(400, 301) && ratio > Rational(5, 4);
    return r;
}

CriterionResult c2_square65() {
    CriterionResult r{2, "square65 best order", true, Json::object()};
    GeneratedCase c = gen_square_65(Rational(1, 100));
    SearchResult best = best_exhaustive(c.instance);
    r.details["best"] = to_json(best);
    r.details["opt_reference"] = check_reference(c, "opt", Rational(501, 100), r.pass);
    r.pass = r.pass && best.height == Rational(149, 25) && best.orderings_examined == 5040;
    return r;
}

CriterionResult c3_square43() {
    CriterionResult r{3, "square43 family h=2", true, Json::object()};
    GeneratedCase c = gen_square_43(2, Rational(1, 10));
    const Rational want(49, 5);
    PackingTrace dec = pack(c.instance, Ordering::by_decreasing_size(*c.instance));
    const bool layout_ok = layout_of(dec.final_packing()) == layout_of(c.reference_packings.at("bl_figure"));
    r.details["decreasing_height"] = dec.height().str();
    r.details["decreasing_layout_matches_figure"] = layout_ok;
    PackingTrace fig = pack(c.instance, c.orderings.at("figure"));
    r.details["figure_ordering_height"] = fig.height().str();
    r.details["opt_reference"] = check_reference(c, "opt", c.expected.at("opt_height_claimed"), r.pass);
    auto [lo, hi] = sampled_extremes(c.instance, 100000, 7);
    r.details["sampled"] = {{"samples", 100000}, {"seed", 7}, {"min_height", lo.height.str()}, {"max_height", hi.height.str()}};
    r.pass = r.pass && dec.height() == want && layout_ok && !(lo.height < want);
    return r;
}

CriterionResult c4_checkerboard() {
    CriterionResult r{4, "checkerboard m=4", true, Json::object()};
    const int m = 4;
    GeneratedCase c = gen_checkerboard(m);
    Packing p = pack(c.instance, Ordering::by_decreasing_size(*c.instance)).final_packing();
    const Rational want(3263, 544);
    r.details["items"] = c.instance->size();
    r.details["height"] = p.height().str();
    // rows of unit squares: sorted bottom faces, a new row starts at a jump of at least 1/2
    std::vector<Rational> ys;
    for (const Placement& q : p.placements())
        if (c.instance->item(q.id).w == 1) ys.push_back(q.y);
    std::sort(ys.begin(), ys.end());
    std::vector<std::pair<Rational, int>> rows;  // lowest bottom face, count
    for (std::size_t i = 0; i < ys.size(); ++i) {
        if (i == 0 || ys[i] - ys[i - 1] >= Rational(1, 2)) rows.emplace_back(ys[i], 0);
        ++rows.back().second;
    }
    Json counts = Json::array();
    bool rows_ok = static_cast<int>(rows.size()) == m;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        counts.push_back({{"lowest_y", rows[i].first.str()}, {"count", rows[i].second}});
        rows_ok = rows_ok && rows[i].second == m * m + static_cast<int>(i);
    }
    r.details["unit_rows"] = counts;
    r.pass = p.height() == want && rows_ok;
    return r;
}

CriterionResult c5_reset_row() {
    CriterionResult r{5, "reset row m=4", true, Json::object()};
    const int m = 4;
    GeneratedCase c = gen_checkerboard_reset(m);
    Packing p = pack(c.instance, c.orderings.at("decreasing")).final_packing();
    Json tops = Json::array();
    bool ok = !c.groups.at("reset").empty();
    for (std::size_t k = 0; k < p.size(); ++k) {
        const ItemId id = p.placements()[k].id;
        const auto& g = c.groups.at("reset");
        if (std::find(g.begin(), g.end(), id) == g.end()) continue;
        const Rational tf = p.faces(k).tf;
        tops.push_back({{"id", id}, {"size", c.instance->item(id).w.str()}, {"top", tf.str()}});
        ok = ok && tf == m + 3;
    }
    r.details["reset_tops"] = tops;
    r.details["height"] = p.height().str();
    r.pass = ok;
    return r;
}

CriterionResult c6_ten_thirds() {
    CriterionResult r{6, "ten-thirds n=2..4", true, Json::object()};
    Json rows = Json::array();
    std::optional<Rational> prev;
    for (int n = 2; n <= 4; ++n) {
        GeneratedCase c = gen_ten_thirds(n);
        const Rational h = bl_height(*c.instance, c.orderings.at("adversarial"));
        const Rational lb = c.expected.at("bl_height_lower_bound");
        const Rational ratio = h / area_lower_bound(*c.instance);
        const bool above = !(h < lb);
        const bool mono = !prev || !(ratio < *prev);
        rows.push_back({{"n", n},
                        {"m", ten_thirds_m(n)},
                        {"items", c.instance->size()},
                        {"height", h.str()},
                        {"required", lb.str()},
                        {"meets_required", above},
                        {"ratio_to_lb", ratio.str()},
                        {"ratio_decimal", ratio.to_double()},
                        {"nondecreasing", mono}});
        r.pass = r.pass && above && mono;
        prev = ratio;
    }
    r.details["rows"] = rows;
    return r;
}

CriterionResult c7_local_search() {
    CriterionResult r{7, "k-local optimum at ratio 2", true, Json::object()};
    Json rows = Json::array();
    for (int k = 1; k <= 3; ++k) {
        GeneratedCase c = gen_local_search(k);
        const Ordering& adv = c.orderings.at("adversarial");
        const Rational h = bl_height(*c.instance, adv);
        ImproveResult im = improve(*c.instance, adv, static_cast<std::size_t>(k), Strategy::first_improvement);
        bool ok = true;
        Json ref = check_reference(c, "opt", Rational(k + 2), ok);
        const bool local_opt = !im.ordering;
        ok = ok && local_opt && h == 2 * (k + 2);
        rows.push_back({{"k", k},
                        {"items", c.instance->size()},
                        {"height", h.str()},
                        {"neighbors_evaluated", im.evaluated},
                        {"neighbor_count", neighbor_count(c.instance->size(), static_cast<std::size_t>(k))},
                        {"locally_optimal", local_opt},
                        {"opt_reference", ref},
                        {"ratio", (h / Rational(k + 2)).str()},
                        {"ok", ok}});
        r.pass = r.pass && ok;
    }
    r.details["rows"] = rows;
    return r;
}

CriterionResult c8_exp_steps() {
    CriterionResult r{8, "exponential improvement steps", true, Json::object()};
    Json rows = Json::array();
    for (int k = 3; k <= 5; ++k) {
        GeneratedCase c = gen_exponential_steps(k);
        std::vector<Ordering> sched = countdown_schedule(k);
        bool ok = sched.size() == (std::size_t{1} << (k - 1));
        Json heights = Json::array();
        std::optional<Rational> prev;
        std::size_t max_support = 0;
        for (std::size_t p = 0; p < sched.size(); ++p) {
            const Rational h = bl_height(*c.instance, sched[p]);
            heights.push_back(h.str());
            ok = ok && h == pow2(k) - static_cast<std::int64_t>(p);
            if (prev) ok = ok && h < *prev;
            if (p > 0) max_support = std::max(max_support, support_size(sched[p - 1], sched[p]));
            prev = h;
        }
        ok = ok && max_support <= static_cast<std::size_t>(k);
        rows.push_back({{"k", k}, {"orderings", sched.size()}, {"heights", heights}, {"max_support", max_support}, {"ok", ok}});
        r.pass = r.pass && ok;
    }
    r.details["rows"] = rows;
    return r;
}

struct CorpusRun {
    std::vector<RandomCase> cases;
    std::vector<AnalysisReport> reports;
};

CorpusRun analyze_corpus() {
    CorpusRun run;
    run.cases = random_corpus(kCorpusSize, kCorpusSeed);
    run.reports.resize(run.cases.size());
    // analyze() parallelizes per piece; cases go one by one
    for (std::size_t i = 0; i < run.cases.size(); ++i) run.reports[i] = analyze(pack(run.cases[i].instance, run.cases[i].ordering));
    return run;
}

std::string describe(const RandomCase& c) {
    std::string s = "W=" + c.instance->width().str() + " sizes";
    for (const Item& it : c.instance->items()) s += " " + it.w.str();
    s += " order";
    for (ItemId id : c.ordering.ids()) s += " " + std::to_string(id);
    return s;
}

CriterionResult c9_structure() {
    CriterionResult r{9, "structure property suite", true, Json::object()};
    CorpusRun run = analyze_corpus();
    std::map<std::string, std::size_t> counts = {{"hamiltonian", 0}, {"min_vertices", 0}, {"structure", 0}, {"peaks", 0},
                                                 {"cover", 0},       {"wide_squares", 0}, {"exclusivity", 0}};
    std::size_t pieces = 0, wide_checks = 0;
    Json examples = Json::array();
    for (std::size_t i = 0; i < run.cases.size(); ++i) {
        const AnalysisReport& rep = run.reports[i];
        counts["exclusivity"] += rep.exclusivity_violations;
        for (const PieceVerdict& v : rep.pieces) {
            ++pieces;
            std::vector<std::string> failed;
            if (!v.graph.valid()) failed.push_back("hamiltonian");
            if (v.graph.circuit.size() < 4) failed.push_back("min_vertices");
            if (!v.structure.ok) failed.push_back("structure");
            if (!v.peaks.ok) failed.push_back("peaks");
            if (!v.cover.ok) failed.push_back("cover");
            if (!v.wide.ok) failed.push_back("wide_squares");
            for (const WideCheck& c : v.wide.checks) wide_checks += c.applicable;
            for (const auto& f : failed) ++counts[f];
            if (!failed.empty() && examples.size() < 10) {
                Json e = to_json(v);
                e["case"] = i;
                e["instance"] = describe(run.cases[i]);
                e["failed"] = failed;
                examples.push_back(e);
            }
        }
    }
    std::size_t total = 0;
    Json cj = Json::object();
    for (const auto& [k, n] : counts) {
        cj[k] = n;
        total += n;
    }
    r.details = {{"seed", kCorpusSeed}, {"cases", run.cases.size()}, {"pieces", pieces}, {"applicable_wide_checks", wide_checks},
                 {"violations", cj},    {"total_violations", total},  {"examples", examples}};
    r.pass = total == 0;
    return r;
}

CriterionResult c10_bound() {
    CriterionResult r{10, "global 16x bound", true, Json::object()};
    std::vector<std::pair<std::string, Packing>> packings;
    {
        GeneratedCase c = gen_square_43(2, Rational(1, 10));
        packings.emplace_back("square43 decreasing", pack(c.instance, Ordering::by_decreasing_size(*c.instance)).final_packing());
        packings.emplace_back("square43 figure", pack(c.instance, c.orderings.at("figure")).final_packing());
    }
    {
        GeneratedCase c = gen_checkerboard(4);
        packings.emplace_back("checkerboard 4", pack(c.instance, Ordering::by_decreasing_size(*c.instance)).final_packing());
    }
    {
        GeneratedCase c = gen_checkerboard_reset(4);
        packings.emplace_back("reset row 4", pack(c.instance, c.orderings.at("decreasing")).final_packing());
    }
    for (int n = 2; n <= 4; ++n) {
        GeneratedCase c = gen_ten_thirds(n);
        packings.emplace_back("ten-thirds " + std::to_string(n), pack(c.instance, c.orderings.at("adversarial")).final_packing());
    }
    const std::size_t named = packings.size();
    for (const RandomCase& c : random_corpus(kCorpusSize, kCorpusSeed)) packings.emplace_back("corpus", pack(c.instance, c.ordering).final_packing());

    std::vector<BoundReport> reps(packings.size());
    parallel_for(packings.size(), [&](std::size_t i) { reps[i] = check_global_bound(packings[i].second); }, 8);
    std::size_t violations = 0;
    Rational worst = 0;
    Json named_j = Json::array();
    for (std::size_t i = 0; i < reps.size(); ++i) {
        violations += !reps[i].pass;
        worst = max(worst, reps[i].ratio);
        if (i < named) named_j.push_back({{"packing", packings[i].first}, {"bound", to_json(reps[i])}});
    }
    r.details = {{"packings", packings.size()}, {"violations", violations}, {"worst_ratio", worst.str()},
                 {"worst_ratio_decimal", worst.to_double()}, {"named", named_j}};
    r.pass = violations == 0;
    return r;
}

CriterionResult c11_oracles() {
    CriterionResult r{11, "oracle equivalence", true, Json::object()};
    std::vector<RandomCase> cases = random_corpus(kCorpusSize, kCorpusSeed);
    std::vector<char> bl_ok(cases.size()), flood_ok(cases.size());
    std::vector<std::string> areas(cases.size());
    parallel_for(cases.size(), [&](std::size_t i) {
        PackingTrace t = pack(cases[i].instance, cases[i].ordering);
        bl_ok[i] = verify_bottom_left(t).ok;
        PieceMap m(t);
        Rational piece_free = 0;
        for (const Piece& p : m.pieces()) piece_free += p.free_area_at_end;
        flood_ok[i] = piece_free == m.bounded_free_area_flood();
    }, 4);
    std::size_t bl_bad = 0, flood_bad = 0;
    Json bad = Json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        bl_bad += !bl_ok[i];
        flood_bad += !flood_ok[i];
        if ((!bl_ok[i] || !flood_ok[i]) && bad.size() < 10) bad.push_back({{"case", i}, {"instance", describe(cases[i])}});
    }
    r.details = {{"seed", kCorpusSeed}, {"cases", cases.size()}, {"placement_mismatches", bl_bad}, {"area_mismatches", flood_bad}, {"examples", bad}};
    r.pass = bl_bad == 0 && flood_bad == 0;
    return r;
}

}  // namespace

CriterionResult run_criterion(int id) {
    static const std::vector<std::function<CriterionResult()>> table = {
        c1_rect43, c2_square65, c3_square43, c4_checkerboard, c5_reset_row, c6_ten_thirds,
        c7_local_search, c8_exp_steps, c9_structure, c10_bound, c11_oracles};
    if (id < 1 || id > static_cast<int>(table.size())) throw InvalidInput("no criterion " + std::to_string(id));
    const auto t0 = Clock::now();
    CriterionResult r;
    try {
        r = table[static_cast<std::size_t>(id - 1)]();
    } catch (const std::exception& e) {
        r = {id, "criterion " + std::to_string(id), false, {{"error", e.what()}}};
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
}

std::vector<std::string> suite_names() {
    return {"thm-rect43", "cor-square65", "thm-square43", "checkerboard", "tenthirds", "localsearch", "expsteps", "structure-suite", "bound-suite", "all"};
}

std::vector<int> suite_criteria(const std::string& suite) {
    if (suite == "thm-rect43") return {1};
    if (suite == "cor-square65") return {2};
    if (suite == "thm-square43") return {3};
    if (suite == "checkerboard") return {4, 5};
    if (suite == "tenthirds") return {6};
    if (suite == "localsearch") return {7};
    if (suite == "expsteps") return {8};
    if (suite == "structure-suite") return {9, 11};
    if (suite == "bound-suite") return {10};
    if (suite == "all") return {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    throw InvalidInput("unknown suite '" + suite + "'");
}

std::vector<CriterionResult> run_suite(const std::string& suite) {
    std::vector<CriterionResult> out;
    for (int id : suite_criteria(suite)) out.push_back(run_criterion(id));
    return out;
}

Json to_json(const CriterionResult& r) {
    return {{"criterion", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}};
}

Json suite_report(const std::string& suite, const std::vector<CriterionResult>& results) {
    Json j;
    j["suite"] = suite;
    bool all = true;
    Json arr = Json::array();
    for (const CriterionResult& r : results) {
        all = all && r.pass;
        arr.push_back(to_json(r));
    }
    j["pass"] = all;
    j["criteria"] = arr;
    return j;
}

}  // namespace blpack
