#include "blpack/generators.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace blpack {
namespace {

struct At {
    ItemId id;
    Rational x, y;
};

Packing layout(const InstancePtr& inst, const std::vector<At>& at) {
    std::vector<Placement> p;
    p.reserve(at.size());
    for (const At& a : at) p.push_back({a.id, a.x, a.y});
    return Packing(inst, std::move(p));
}

Ordering ids(std::initializer_list<ItemId> v) { return Ordering(std::vector<ItemId>(v)); }

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidInput(what);
}

std::vector<ItemId> range_ids(ItemId lo, ItemId hi) {
    std::vector<ItemId> v(hi - lo);
    std::iota(v.begin(), v.end(), lo);
    return v;
}

}  // namespace

GeneratedCase gen_rect_43(const Rational& eps) {
    require(eps.sign() > 0 && eps <= Rational(1, 5), "rect43: eps must lie in (0, 1/5]");
    const Rational big = Rational(3) - eps;
    auto inst = std::make_shared<const Instance>(Instance::from_sizes(
        7, {{big, 2}, {big, 2}, {2, 1}, {2, 1}, {2, 1}, {2, 1}, {1, Rational(1) + eps}}));
    GeneratedCase c;
    c.construction = "rect43";
    c.params = {{"eps", eps.str()}};
    c.instance = inst;
    c.orderings.emplace("figure", ids({0, 2, 3, 6, 1, 4, 5}));
    c.orderings.emplace("decreasing", Ordering::by_decreasing_size(*inst));
    c.reference_packings.emplace("opt", layout(inst, {{0, 0, 0},
                                                      {2, 3, 0},
                                                      {3, 5, 0},
                                                      {6, 3, 1},
                                                      {1, 4, 1},
                                                      {4, 0, 2},
                                                      {5, 2, Rational(2) + eps}}));
    c.reference_packings.emplace("bl_figure", layout(inst, {{0, 0, 0},
                                                           {2, big, 0},
                                                           {3, big + 2, 0},
                                                           {6, big, 1},
                                                           {1, big + 1, 1},
                                                           {4, 0, 2},
                                                           {5, 0, 3}}));
    c.expected["opt_height"] = Rational(3) + eps;
    c.expected["bl_figure_height"] = 4;
    c.expected["bl_height_figure"] = 4;
    c.expected["bl_best_height"] = 4;
    return c;
}

GeneratedCase gen_rect_43_integer(int h) {
    require(h >= 1, "rect43int: h must be at least 1");
    const Rational H = h;
    auto inst = std::make_shared<const Instance>(Instance::from_sizes(
        10, {{4, 2 * H}, {4, 2 * H}, {3, H}, {3, H}, {3, H}, {3, H}, {1, H + 1}}));
    GeneratedCase c;
    c.construction = "rect43int";
    c.params = {{"h", std::to_string(h)}};
    c.instance = inst;
    c.orderings.emplace("decreasing", Ordering::by_decreasing_size(*inst));
    c.reference_packings.emplace("opt", layout(inst, {{0, 0, 0},
                                                      {2, 4, 0},
                                                      {3, 7, 0},
                                                      {6, 4, H},
                                                      {1, 6, H},
                                                      {4, 0, 2 * H},
                                                      {5, 3, 2 * H + 1}}));
    c.expected["opt_height"] = 3 * H + 1;
    if (h >= 2) c.expected["bl_best_height"] = 4 * H;
    return c;
}

GeneratedCase gen_square_65(const Rational& eps) {
    require(eps.sign() > 0 && eps <= Rational(1, 5), "square65: eps must lie in (0, 1/5]");
    const Rational big = Rational(3) - 2 * eps;
    const Rational one = Rational(1) + eps;
    auto inst = std::make_shared<const Instance>(Instance::from_squares(7, {big, big, 2, 2, 2, 2, one}));
    GeneratedCase c;
    c.construction = "square65";
    c.params = {{"eps", eps.str()}};
    c.instance = inst;
    c.orderings.emplace("figure", ids({0, 2, 3, 4, 5, 1, 6}));
    c.orderings.emplace("decreasing", Ordering::by_decreasing_size(*inst));
    c.reference_packings.emplace("opt", layout(inst, {{0, 0, 0},
                                                      {2, 3, 0},
                                                      {3, 5, 0},
                                                      {6, 3, 2},
                                                      {1, Rational(4) + eps, 2},
                                                      {4, 0, big},
                                                      {5, 2, Rational(3) + eps}}));
    c.reference_packings.emplace("opt_mirror", layout(inst, {{2, 0, 0},
                                                             {3, 2, 0},
                                                             {0, Rational(4) + 2 * eps, 0},
                                                             {1, 0, 2},
                                                             {6, big, 2},
                                                             {4, big, Rational(3) + eps},
                                                             {5, 5, big}}));
    c.reference_packings.emplace("bl_figure", layout(inst, {{0, 0, 0},
                                                           {2, big, 0},
                                                           {3, big + 2, 0},
                                                           {4, big, 2},
                                                           {5, big + 2, 2},
                                                           {1, 0, big},
                                                           {6, big, 4}}));
    c.expected["opt_height"] = Rational(5) + eps;
    c.expected["opt_mirror_height"] = Rational(5) + eps;
    c.expected["bl_figure_height"] = Rational(6) - 4 * eps;
    c.expected["bl_height_figure"] = Rational(6) - 4 * eps;
    c.expected["bl_best_height"] = Rational(6) - 4 * eps;
    return c;
}

GeneratedCase gen_square_43(int h, const Rational& eps) {
    require(h >= 2, "square43: h must be at least 2");
    require(eps.sign() > 0 && eps < Rational(1, 4 * h), "square43: eps must lie in (0, 1/(4h))");
    const Rational H = h;
    const Rational q = H + eps;
    const Rational s = H + 1;
    const Rational B = 2 * H + 1 - eps;
    const Rational W = 4 * H * H + 3 * H;
    std::vector<Rational> sizes;
    sizes.push_back(q);
    for (int i = 0; i < 4 * h; ++i) sizes.push_back(s);
    for (int i = 0; i < 2 * h; ++i) sizes.push_back(B);
    auto inst = std::make_shared<const Instance>(Instance::from_squares(W, sizes));
    const ItemId q_id = 0, small0 = 1, big0 = static_cast<ItemId>(1 + 4 * h);

    GeneratedCase c;
    c.construction = "square43";
    c.params = {{"h", std::to_string(h)}, {"eps", eps.str()}};
    c.instance = inst;
    c.groups["square"] = {q_id};
    c.groups["small"] = range_ids(small0, big0);
    c.groups["big"] = range_ids(big0, big0 + 2 * h);

    // h bigs, all 4h smalls, the other h bigs, then the square: stacks the bigs.
    std::vector<ItemId> figure;
    for (int i = 0; i < h; ++i) figure.push_back(big0 + i);
    for (int i = 0; i < 4 * h; ++i) figure.push_back(small0 + i);
    for (int i = h; i < 2 * h; ++i) figure.push_back(big0 + i);
    figure.push_back(q_id);
    c.orderings.emplace("figure", Ordering(figure));
    c.orderings.emplace("decreasing", Ordering::by_decreasing_size(*inst));

    // Unique optimum of the unmodified instance, with the modified sizes dropped in.
    std::vector<At> opt;
    ItemId sm = small0, bg = big0;
    for (int i = 0; i < 2 * h; ++i) opt.push_back({sm++, i * s, 0});
    for (int i = 0; i < h; ++i) opt.push_back({bg++, i * B, s});
    opt.push_back({q_id, H * B, s});
    for (int i = 0; i < 2 * h; ++i) opt.push_back({sm++, W - (2 * h - i) * s, 2 * H + 1 + eps});
    for (int i = 0; i < h; ++i) opt.push_back({bg++, W - (h - i) * B, 0});
    c.reference_packings.emplace("opt", layout(inst, opt));

    std::vector<At> bl;
    bg = big0;
    sm = small0;
    for (int i = 0; i < h; ++i) bl.push_back({bg++, i * B, 0});
    for (int i = 0; i < 2 * h; ++i) {
        bl.push_back({sm++, H * B + i * s, 0});
    }
    for (int i = 0; i < 2 * h; ++i) bl.push_back({sm++, H * B + i * s, s});
    for (int i = 0; i < h; ++i) bl.push_back({bg++, i * B, B});
    bl.push_back({q_id, H * B, 2 * s});
    c.reference_packings.emplace("bl_figure", layout(inst, bl));

    // the reference layout needs the top-right row lifted by 2 eps to fit the enlarged square
    c.expected["opt_height"] = 3 * H + 2 + eps;
    c.expected["opt_height_claimed"] = 3 * H + 2 - eps;
    c.expected["bl_figure_height"] = 4 * H + 2 - 2 * eps;
    c.expected["bl_height_figure"] = 4 * H + 2 - 2 * eps;
    c.expected["bl_best_height"] = 4 * H + 2 - 2 * eps;
    return c;
}

Rational checkerboard_eps(int m) {
    const std::int64_t M = m;
    return Rational(2, M * M * M * (M * M + 1));
}

GeneratedCase gen_checkerboard(int m) {
    require(m >= 2 && m % 2 == 0, "checkerboard: m must be even and at least 2");
    const Rational eps = checkerboard_eps(m);
    const Rational W = Rational(2 * m * m) - Rational(1, m);
    const int graded = m * m;
    const int units = m * m * m + (m - 1) * m / 2;
    std::vector<Rational> sizes;
    for (int i = 1; i <= graded; ++i) sizes.push_back(Rational(2) - i * eps);
    for (int i = 0; i < units; ++i) sizes.push_back(1);
    auto inst = std::make_shared<const Instance>(Instance::from_squares(W, sizes));

    GeneratedCase c;
    c.construction = "checkerboard";
    c.params = {{"m", std::to_string(m)}};
    c.instance = inst;
    c.groups["graded"] = range_ids(0, graded);
    c.groups["unit"] = range_ids(graded, graded + units);
    c.orderings.emplace("decreasing", Ordering::identity(inst->size()));

    // Graded squares in one row, unit squares in full rows of 2m^2-1 above it.
    std::vector<At> ub;
    Rational x = 0;
    for (int i = 0; i < graded; ++i) {
        ub.push_back({static_cast<ItemId>(i), x, 0});
        x += sizes[i];
    }
    const int per_row = 2 * m * m - 1;
    for (int u = 0; u < units; ++u) ub.push_back({static_cast<ItemId>(graded + u), u % per_row, 2 + u / per_row});
    const int rows = (units + per_row - 1) / per_row;
    c.reference_packings.emplace("opt_bound", layout(inst, ub));

    c.expected["eps"] = eps;
    c.expected["bl_height_decreasing"] = Rational(m + 2) - eps;
    c.expected["opt_bound_height"] = 2 + rows;
    c.expected["opt_upper_bound"] = m / 2 + 3;
    return c;
}

ResetRow gen_reset_row(int m) {
    require(m >= 2 && m % 2 == 0, "resetrow: m must be even and at least 2");
    const Rational eps = checkerboard_eps(m);
    ResetRow r;
    for (int k = 0; k <= m; ++k) r.sizes.push_back(Rational(1) + (m * m) * eps);
    for (int i = m * m - 1; i > m; --i) r.sizes.push_back(Rational(1) + i * eps);
    for (int i = m; i >= 1; --i)
        if (i % 2 == 1) r.sizes.push_back(Rational(1) + i * eps);
    return r;
}

GeneratedCase gen_checkerboard_reset(int m) {
    GeneratedCase base = gen_checkerboard(m);
    ResetRow reset = gen_reset_row(m);
    std::vector<Rational> sizes;
    for (const Item& it : base.instance->items()) sizes.push_back(it.w);
    const ItemId first = static_cast<ItemId>(sizes.size());
    for (const Rational& s : reset.sizes) sizes.push_back(s);
    auto inst = std::make_shared<const Instance>(Instance::from_squares(base.instance->width(), sizes));
    GeneratedCase c;
    c.construction = "resetrow";
    c.params = base.params;
    c.instance = inst;
    c.groups = base.groups;
    c.groups["reset"] = range_ids(first, static_cast<ItemId>(sizes.size()));
    c.orderings.emplace("decreasing", Ordering::identity(inst->size()));
    c.expected["eps"] = base.expected["eps"];
    c.expected["reset_top"] = m + 3;
    c.expected["bl_height_decreasing"] = m + 3;
    return c;
}

int ten_thirds_m(int n) {
    // largest even m with 3m <= 4 * 2^n
    std::int64_t cap = (std::int64_t{4} << n) / 3;
    return static_cast<int>(cap - cap % 2);
}

GeneratedCase gen_ten_thirds(int n) {
    require(n >= 2 && n <= 12, "tenthirds: n must lie in [2, 12]");
    const int m = ten_thirds_m(n);
    const Rational eps = checkerboard_eps(m);
    GeneratedCase base = gen_checkerboard_reset(m);
    const Rational W = base.instance->width();

    std::vector<Rational> sizes;
    for (const Item& it : base.instance->items()) sizes.push_back(it.w);
    GeneratedCase c;
    c.construction = "tenthirds";
    c.params = {{"n", std::to_string(n)}};
    c.groups = base.groups;

    const std::int64_t den = std::lcm(eps.small_den(), static_cast<std::int64_t>(m));
    Board board(W, den);
    for (const Rational& s : sizes) board.place(s, s);

    auto add = [&](const Rational& s, const std::string& group) {
        Position p = board.place(s, s);
        c.groups[group].push_back(static_cast<ItemId>(sizes.size()));
        sizes.push_back(s);
        return p;
    };

    // Row 1: four unit squares then one square of size 2+(a_i+1)eps.
    const std::int64_t reps1 = (W / 6).floor().convert_to<std::int64_t>();
    Rational row_end = 0;
    for (std::int64_t i = 1; i <= reps1; ++i) {
        for (int u = 0; u < 4; ++u) {
            Position p = add(1, "row1-unit");
            row_end = max(row_end, p.x + 1);
        }
        const Rational s = Rational(2) + ((i % 2 == 1 ? 1 : 0) + 1) * eps;
        Position p = add(s, "row1");
        row_end = max(row_end, p.x + s);
    }
    {
        const Rational filler = Rational(2) + eps;
        while (W - row_end >= Rational(4) + 2 * eps) {
            Position at = board.locate(filler, filler);
            if (at.x < row_end) break;
            add(filler, "row1");
            row_end = at.x + filler;
        }
    }

    // Rows j = 2..n-1: squares of size 2^j + (a_i + 2^{j-1}) eps.
    for (int j = 2; j <= n - 1; ++j) {
        const Rational pj = pow2(j), ph = pow2(j - 1);
        const std::int64_t reps = (W / (pj + pow2(j + 1))).floor().convert_to<std::int64_t>();
        const std::string group = "row" + std::to_string(j);
        row_end = 0;
        for (std::int64_t i = 1; i <= reps; ++i) {
            const Rational s = pj + ((i % 2 == 1 ? 1 : 0) + ph) * eps;
            Position p = add(s, group);
            row_end = max(row_end, p.x + s);
        }
        const Rational filler = pj + ph * eps;
        while (W - row_end > pow2(j + 1) + pj * eps) {
            Position at = board.locate(filler, filler);
            if (at.x < row_end) break;
            add(filler, group);
            row_end = at.x + filler;
        }
    }

    add(pow2(n) + pow2(n - 1) * eps, "capstone");

    auto inst = std::make_shared<const Instance>(Instance::from_squares(W, sizes));
    c.instance = inst;
    c.orderings.emplace("adversarial", Ordering::identity(inst->size()));
    Rational lb = m;
    for (int i = 1; i <= n - 1; ++i) lb += pow2(i);
    lb += pow2(n);
    c.expected["eps"] = eps;
    c.expected["m"] = m;
    c.expected["bl_height_lower_bound"] = lb;
    c.expected["bl_height_adversarial"] = board.height();
    return c;
}

GeneratedCase gen_local_search(int k) {
    require(k >= 1, "localsearch: k must be at least 1");
    const int units = 2 * k + 4, bigs = 2 * k + 5;
    const Rational S = k + 2;
    const Rational W = Rational(2 * k + 4) * Rational(k + 3);
    std::vector<Rational> sizes(units, Rational(1));
    for (int i = 0; i < bigs; ++i) sizes.push_back(S);
    auto inst = std::make_shared<const Instance>(Instance::from_squares(W, sizes));
    GeneratedCase c;
    c.construction = "localsearch";
    c.params = {{"k", std::to_string(k)}};
    c.instance = inst;
    c.groups["unit"] = range_ids(0, units);
    c.groups["big"] = range_ids(units, units + bigs);
    std::vector<ItemId> adv;
    for (int i = 0; i < units; ++i) {
        adv.push_back(static_cast<ItemId>(i));
        adv.push_back(static_cast<ItemId>(units + i));
    }
    adv.push_back(static_cast<ItemId>(units + bigs - 1));
    c.orderings.emplace("adversarial", Ordering(adv));
    c.orderings.emplace("decreasing", Ordering::by_decreasing_size(*inst));

    std::vector<At> opt;
    for (int i = 0; i < bigs; ++i) opt.push_back({static_cast<ItemId>(units + i), i * S, 0});
    const Rational col = bigs * S;
    for (int i = 0; i < units; ++i) opt.push_back({static_cast<ItemId>(i), col + (i % 2), i / 2});
    c.reference_packings.emplace("opt", layout(inst, opt));
    c.expected["opt_height"] = S;
    c.expected["bl_height_adversarial"] = 2 * S;
    c.expected["klocal_height"] = 2 * S;
    return c;
}

GeneratedCase gen_exponential_steps(int k) {
    require(k >= 1 && k <= 30, "expsteps: k must lie in [1, 30]");
    std::vector<std::pair<Rational, Rational>> sizes;
    for (int i = 0; i < k; ++i) {
        sizes.emplace_back(Rational(1, k), pow2(i));
        sizes.emplace_back(Rational(1), Rational(1, k));
    }
    auto inst = std::make_shared<const Instance>(Instance::from_sizes(1, sizes));
    GeneratedCase c;
    c.construction = "expsteps";
    c.params = {{"k", std::to_string(k)}};
    c.instance = inst;
    for (int i = 0; i < k; ++i) {
        c.groups["vertical"].push_back(static_cast<ItemId>(2 * i));
        c.groups["horizontal"].push_back(static_cast<ItemId>(2 * i + 1));
    }
    c.orderings.emplace("figure", Ordering::identity(inst->size()));
    c.expected["bl_height_figure"] = pow2(k);
    c.expected["klocal_final_height"] = pow2(k - 1) + 1;
    return c;
}

namespace {

const std::string& param(const std::map<std::string, std::string>& p, const std::string& key, const std::string& fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

int int_param(const std::map<std::string, std::string>& p, const std::string& key, const std::string& fallback) {
    const std::string& v = param(p, key, fallback);
    try {
        std::size_t used = 0;
        int r = std::stoi(v, &used);
        if (used != v.size()) throw InvalidInput("");
        return r;
    } catch (const std::exception&) {
        throw InvalidInput("parameter " + key + " must be an integer, got '" + v + "'");
    }
}

Rational rational_param(const std::map<std::string, std::string>& p, const std::string& key, const std::string& fallback) {
    const std::string& v = param(p, key, fallback);
    auto r = Rational::try_parse(v);
    if (!r) throw InvalidInput("parameter " + key + " must be a rational, got '" + v + "'");
    return *r;
}

}  // namespace

std::vector<std::string> construction_names() {
    return {"rect43", "rect43int", "square65", "square43", "checkerboard", "resetrow", "tenthirds", "localsearch", "expsteps"};
}

GeneratedCase generate(const std::string& name, const std::map<std::string, std::string>& p) {
    if (name == "rect43") return gen_rect_43(rational_param(p, "eps", "1/100"));
    if (name == "rect43int") return gen_rect_43_integer(int_param(p, "h", "2"));
    if (name == "square65") return gen_square_65(rational_param(p, "eps", "1/100"));
    if (name == "square43") return gen_square_43(int_param(p, "h", "2"), rational_param(p, "eps", "1/10"));
    if (name == "checkerboard") return gen_checkerboard(int_param(p, "m", "4"));
    if (name == "resetrow") return gen_checkerboard_reset(int_param(p, "m", "4"));
    if (name == "tenthirds") return gen_ten_thirds(int_param(p, "n", "2"));
    if (name == "localsearch") return gen_local_search(int_param(p, "k", "3"));
    if (name == "expsteps") return gen_exponential_steps(int_param(p, "k", "4"));
    throw InvalidInput("unknown construction '" + name + "'");
}

}  // namespace blpack
