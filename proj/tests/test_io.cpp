#include <doctest.h>

#include "blpack/generators.hpp"
#include "blpack/io.hpp"

using namespace blpack;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
    std::size_t n = 0;
    for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("instance and packing files round trip") {
    GeneratedCase c = gen_square_43(2, Rational(1, 10));
    InstanceMeta meta{c.construction, c.params};
    Json j = instance_to_json(*c.instance, meta);
    InstanceMeta back;
    Instance inst = instance_from_json(Json::parse(dump(j)), &back);
    CHECK(dump(instance_to_json(inst, back)) == dump(j));
    CHECK(back.construction == "square43");
    CHECK(back.params == c.params);

    PackingTrace t = pack(c.instance, c.orderings.at("figure"));
    Json tj = trace_to_json(t);
    PackingTrace t2 = trace_from_json(Json::parse(dump(tj)));
    CHECK(t2.ordering() == t.ordering());
    CHECK(t2.steps() == t.steps());
    CHECK(dump(trace_to_json(t2)) == dump(tj));
    CHECK(dump(packing_to_json(t2.final_packing())) == dump(packing_to_json(t.final_packing())));
}

TEST_CASE("malformed files are rejected") {
    CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"width":"x","items":[]})")), InvalidInput);
    CHECK_THROWS_AS(instance_from_json(Json::parse(R"({"items":[]})")), InvalidInput);
    CHECK_THROWS_AS(ordering_from_json(Json::parse("[0,0]")), InvalidInput);
    GeneratedCase c = gen_rect_43(Rational(1, 100));
    Json p = packing_to_json(c.reference_packings.at("opt"));
    p["height"] = "5";
    CHECK_THROWS_AS(packing_from_json(p), InvalidInput);
    CHECK_THROWS_AS(read_json("/nonexistent/file.json"), IoError);
}

TEST_CASE("svg rendering") {
    GeneratedCase cb = gen_checkerboard(4);
    Packing p = pack(cb.instance, cb.orderings.at("decreasing")).final_packing();
    CHECK(count(render_svg(p), "<rect ") == 86);
    GeneratedCase r = gen_rect_43(Rational(1, 100));
    const std::string svg = render_svg(r.reference_packings.at("opt"));
    CHECK(count(svg, "<rect ") == 7);
    CHECK(svg.find("viewBox=\"0 0 7 3.01\"") != std::string::npos);
    auto empty = std::make_shared<const Instance>(Instance(3, {}));
    const std::string e = render_svg(Packing(empty, {}));
    CHECK(count(e, "<rect ") == 0);
    CHECK(count(e, "<polyline ") == 1);
}

TEST_CASE("random corpus is seeded and within its ranges") {
    std::vector<RandomCase> a = random_corpus(200, 99), b = random_corpus(200, 99);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].ordering == b[i].ordering);
        CHECK(dump(instance_to_json(*a[i].instance)) == dump(instance_to_json(*b[i].instance)));
        const Instance& inst = *a[i].instance;
        CHECK(inst.size() >= 4);
        CHECK(inst.size() <= 12);
        CHECK(inst.squares_only());
        for (const Item& it : inst.items()) {
            CHECK(it.w >= Rational(1, 4));
            CHECK(it.w <= 20);
            CHECK(it.w.denominator() <= 4);
        }
        CHECK(inst.width() >= inst.max_height());
        CHECK(inst.width() <= 4 * inst.max_height());
    }
}
