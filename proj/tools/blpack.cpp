#include <filesystem>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "blpack/analysis.hpp"
#include "blpack/generators.hpp"
#include "blpack/io.hpp"
#include "blpack/local_search.hpp"
#include "blpack/repro.hpp"

using namespace blpack;

namespace {

struct UsageError : InvalidInput {
    using InvalidInput::InvalidInput;
};

void emit(const std::string& out, const Json& j) {
    if (out.empty() || out == "-")
        std::cout << dump(j);
    else
        write_json(out, j);
}

std::map<std::string, std::string> parse_params(const std::vector<std::string>& kv) {
    std::map<std::string, std::string> p;
    for (const std::string& s : kv) {
        auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) throw UsageError("parameter '" + s + "' is not key=value");
        p[s.substr(0, eq)] = s.substr(eq + 1);
    }
    return p;
}

// <out>.json -> <out>.<tag>.json
std::string sibling(const std::string& out, const std::string& tag) {
    std::filesystem::path p(out);
    std::string stem = p.extension() == ".json" ? p.stem().string() : p.filename().string();
    return (p.parent_path() / (stem + "." + tag + ".json")).string();
}

InstancePtr load_instance(const std::string& path, InstanceMeta* meta) {
    Json j = read_json(path);
    // a packing file embeds its instance
    if (j.contains("instance") && j.contains("placements")) j = j.at("instance");
    return std::make_shared<const Instance>(instance_from_json(j, meta));
}

Ordering resolve_ordering(const std::string& src, const Instance& inst, const InstanceMeta& meta) {
    if (src.empty() || src == "given" || src == "identity") return Ordering::identity(inst.size());
    if (src == "by-decreasing-width") return Ordering::by_decreasing_width(inst);
    if (src == "by-decreasing-size") return Ordering::by_decreasing_size(inst);
    Ordering o;
    if (src.rfind("file:", 0) == 0) {
        o = ordering_from_json(read_json(src.substr(5)));
    } else if (src.rfind("named:", 0) == 0) {
        if (meta.construction.empty()) throw InvalidInput("instance has no construction metadata for a named ordering");
        GeneratedCase c = generate(meta.construction, meta.params);
        auto it = c.orderings.find(src.substr(6));
        if (it == c.orderings.end()) throw InvalidInput("construction " + meta.construction + " has no ordering '" + src.substr(6) + "'");
        o = it->second;
    } else {
        std::vector<ItemId> ids;
        std::stringstream ss(src);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            try {
                std::size_t used = 0;
                long v = std::stol(tok, &used);
                if (used != tok.size() || v < 0) throw std::invalid_argument("");
                ids.push_back(static_cast<ItemId>(v));
            } catch (const std::exception&) {
                throw UsageError("unknown ordering source '" + src + "'");
            }
        }
        o = Ordering(std::move(ids));
    }
    if (o.size() != inst.size()) throw InvalidInput("ordering has " + std::to_string(o.size()) + " entries, instance has " + std::to_string(inst.size()));
    return o;
}

int cmd_generate(const std::string& name, const std::vector<std::string>& kv, const std::string& out) {
    GeneratedCase c = generate(name, parse_params(kv));
    InstanceMeta meta{c.construction, c.params};
    emit(out, instance_to_json(*c.instance, meta));
    if (!out.empty() && out != "-") {
        for (const auto& [n, o] : c.orderings) write_json(sibling(out, n + ".ordering"), ordering_to_json(o));
        for (const auto& [n, p] : c.reference_packings) write_json(sibling(out, n + ".packing"), packing_to_json(p));
    }
    return 0;
}

int cmd_pack(const std::string& in, const std::string& src, const std::string& out, const std::string& trace_out) {
    InstanceMeta meta;
    InstancePtr inst = load_instance(in, &meta);
    PackingTrace t = pack(inst, resolve_ordering(src, *inst, meta));
    emit(out, packing_to_json(t.final_packing()));
    if (!trace_out.empty()) write_json(trace_out, trace_to_json(t));
    return 0;
}

struct SearchOpts {
    std::string instance, mode = "exhaustive", ordering, strategy = "first", out;
    std::uint64_t samples = 1000, seed = 1;
    std::size_t k = 2, max_steps = 1000;
};

int cmd_search(const SearchOpts& o) {
    InstanceMeta meta;
    InstancePtr inst = load_instance(o.instance, &meta);
    Json j;
    j["mode"] = o.mode;
    if (o.mode == "exhaustive") {
        SearchResult r = best_exhaustive(inst);
        j["best"] = to_json(r);
    } else if (o.mode == "sample") {
        auto [lo, hi] = sampled_extremes(inst, o.samples, o.seed);
        j["samples"] = o.samples;
        j["seed"] = o.seed;
        j["best"] = to_json(lo);
        j["worst"] = to_json(hi);
    } else if (o.mode == "klocal") {
        Strategy s = parse_strategy(o.strategy);
        SearchTrace t;
        if (s == Strategy::scheduled) {
            if (meta.construction != "expsteps") throw InvalidInput("a scheduled start needs an expsteps instance");
            auto kp = meta.params.find("k");
            const int k = kp != meta.params.end() ? std::stoi(kp->second) : static_cast<int>(inst->size() / 2);
            t = run_schedule(*inst, countdown_schedule(k), o.k, o.max_steps);
        } else {
            t = run(*inst, resolve_ordering(o.ordering, *inst, meta), o.k, s, o.max_steps);
        }
        j["search"] = to_json(t);
    } else {
        throw UsageError("unknown search mode '" + o.mode + "' (expected exhaustive, sample or klocal)");
    }
    emit(o.out, j);
    return 0;
}

int cmd_analyze(const std::string& in, const std::string& checks_arg, const std::string& out) {
    const std::set<std::string> known = {"feasible", "bl", "pieces", "structure", "cover", "bound"};
    std::set<std::string> checks;
    if (checks_arg.empty() || checks_arg == "all") {
        checks = known;
    } else {
        std::stringstream ss(checks_arg);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!known.count(tok)) throw UsageError("unknown check '" + tok + "'");
            else checks.insert(tok);
    }
    PackingTrace t = trace_from_json(read_json(in));
    const Packing p = t.final_packing();
    Json j;
    bool ok = true;
    FeasibilityReport f = feasible(p);
    if (checks.count("feasible")) {
        j["feasible"] = to_json(f);
        ok = ok && f.ok;
    }
    // piece geometry only makes sense without overlaps
    const bool geometric = f.ok && p.complete();
    if (checks.count("bl")) {
        BottomLeftReport bl = verify_bottom_left(t);
        j["bl"] = to_json(bl);
        ok = ok && bl.ok;
    }
    const bool want_pieces = checks.count("pieces") || checks.count("structure") || checks.count("cover");
    if (want_pieces && !geometric) {
        j["pieces"] = {{"skipped", "packing is infeasible or incomplete"}};
        ok = false;
    } else if (want_pieces) {
        AnalysisReport rep = analyze(t);
        if (checks.count("pieces")) {
            j["pieces"] = {{"count", rep.pieces.size()},
                           {"exclusivity_violations", rep.exclusivity_violations},
                           {"piece_free_area", rep.piece_free_area.str()},
                           {"flood_free_area", rep.flood_free_area.str()},
                           {"flood_agrees", rep.flood_agrees},
                           {"trenches", to_json(rep.trenches)}};
            ok = ok && rep.flood_agrees && rep.exclusivity_violations == 0 && rep.trenches.measure_identity;
        }
        Json per = Json::array();
        for (const PieceVerdict& v : rep.pieces) {
            Json pj = to_json(v);
            if (!checks.count("structure")) {
                pj.erase("structure");
                pj.erase("peaks");
            }
            if (!checks.count("cover")) {
                pj.erase("cover");
                pj.erase("wide_squares");
            }
            per.push_back(pj);
            if (checks.count("structure")) ok = ok && v.graph.valid() && v.structure.ok && v.peaks.ok;
            if (checks.count("cover")) ok = ok && v.cover.ok && v.wide.ok;
        }
        if (checks.count("structure") || checks.count("cover")) j["piece_verdicts"] = per;
    }
    if (checks.count("bound")) {
        if (!p.instance().squares_only()) {
            j["bound"] = {{"applicable", false}, {"reason", "instance has non-square items"}};
        } else if (!p.complete()) {
            j["bound"] = {{"applicable", false}, {"reason", "packing is incomplete"}};
        } else {
            BoundReport b = check_global_bound(p);
            j["bound"] = to_json(b);
            ok = ok && b.pass;
        }
    }
    j["ok"] = ok;
    emit(out, j);
    return ok ? 0 : 1;
}

int cmd_render(const std::string& in, const std::string& out) {
    Packing p = packing_from_json(read_json(in));
    const std::string svg = render_svg(p);
    if (out.empty() || out == "-")
        std::cout << svg;
    else
        write_text(out, svg);
    return 0;
}

int cmd_repro(const std::string& suite, const std::string& out) {
    suite_criteria(suite);
    std::vector<CriterionResult> results;
    for (int id : suite_criteria(suite)) {
        CriterionResult r = run_criterion(id);
        std::cerr << "criterion " << r.id << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.name << ", " << r.seconds << " s)\n";
        results.push_back(std::move(r));
    }
    Json j = suite_report(suite, results);
    emit(out, j);
    return j.at("pass").get<bool>() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bottom-left strip packing: generators, packer, local search and analysis"};
    app.require_subcommand(1);

    std::string construction, out, instance, ordering = "given", trace_out, checks, input, suite = "all";
    std::vector<std::string> params;
    SearchOpts so;

    auto* gen = app.add_subcommand("generate", "Write a construction's instance, orderings and reference packings");
    gen->add_option("--construction,construction", construction, "Construction name")->required()->check(CLI::IsMember(construction_names()));
    gen->add_option("--param,-p", params, "key=value parameter (repeatable)");
    gen->add_option("--out", out, "Instance file (default stdout)");

    auto* pk = app.add_subcommand("pack", "Run the bottom-left algorithm");
    pk->add_option("--instance", instance, "Instance or packing file")->required();
    pk->add_option("--ordering", ordering,
                   "given | file:<path> | named:<name> | by-decreasing-width | by-decreasing-size | comma-separated ids");
    pk->add_option("--out", out, "Packing file (default stdout)");
    pk->add_option("--trace", trace_out, "Also write the trace (packing plus ordering)");

    auto* se = app.add_subcommand("search", "Search over orderings");
    se->add_option("--instance", so.instance, "Instance file")->required();
    se->add_option("--mode", so.mode, "exhaustive | sample | klocal")->check(CLI::IsMember({"exhaustive", "sample", "klocal"}));
    se->add_option("--samples", so.samples, "Random orderings to sample");
    se->add_option("--seed", so.seed, "Sampling seed");
    se->add_option("--k", so.k, "Neighborhood size for klocal");
    se->add_option("--strategy", so.strategy, "first | best | schedule");
    se->add_option("--max-steps", so.max_steps, "Improvement step cap");
    se->add_option("--ordering", so.ordering, "Start ordering for klocal (same forms as pack)");
    se->add_option("--out", so.out, "Report file (default stdout)");

    auto* an = app.add_subcommand("analyze", "Verify a packing or trace");
    an->add_option("--input,--packing,--trace", input, "Packing or trace file")->required();
    an->add_option("--checks", checks, "Comma list of feasible,bl,pieces,structure,cover,bound (default all)");
    an->add_option("--out", out, "Report file (default stdout)");

    auto* re = app.add_subcommand("render", "Draw a packing as SVG");
    re->add_option("--packing,--input", input, "Packing file")->required();
    re->add_option("--out", out, "SVG file (default stdout)");

    auto* rp = app.add_subcommand("repro", "Run reproduction experiments");
    rp->add_option("--suite", suite, "Suite name")->check(CLI::IsMember(suite_names()));
    rp->add_option("--out", out, "Report file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (*gen) return cmd_generate(construction, params, out);
        if (*pk) return cmd_pack(instance, ordering, out, trace_out);
        if (*se) {
            so.ordering = so.ordering.empty() ? "given" : so.ordering;
            return cmd_search(so);
        }
        if (*an) return cmd_analyze(input, checks, out);
        if (*re) return cmd_render(input, out);
        if (*rp) return cmd_repro(suite, out);
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
