#include "blpack/core.hpp"

#include <algorithm>
#include <numeric>

namespace blpack {

Instance::Instance(Rational width, std::vector<Item> items) : width_(std::move(width)), items_(std::move(items)) {
    if (width_.sign() <= 0) throw InvalidInput("strip width must be positive");
    bool squares = true;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        const Item& it = items_[i];
        if (it.id != i) throw InvalidInput("item ids must be 0..n-1 in order (got " + std::to_string(it.id) + " at " + std::to_string(i) + ")");
        if (it.w.sign() <= 0 || it.h.sign() <= 0) throw InvalidInput("item " + std::to_string(i) + " has non-positive size");
        if (it.w > width_) throw InvalidInput("item " + std::to_string(i) + " is wider than the strip");
        squares = squares && it.is_square();
    }
    kind_ = squares ? InstanceKind::squares : InstanceKind::rectangles;
}

Instance Instance::from_sizes(Rational width, const std::vector<std::pair<Rational, Rational>>& sizes) {
    std::vector<Item> items;
    items.reserve(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) items.push_back({static_cast<ItemId>(i), sizes[i].first, sizes[i].second});
    return Instance(std::move(width), std::move(items));
}

Instance Instance::from_squares(Rational width, const std::vector<Rational>& sizes) {
    std::vector<Item> items;
    items.reserve(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i) items.push_back({static_cast<ItemId>(i), sizes[i], sizes[i]});
    return Instance(std::move(width), std::move(items));
}

Rational Instance::total_area() const {
    Rational a = 0;
    for (const Item& it : items_) a += it.w * it.h;
    return a;
}

Rational Instance::max_height() const {
    Rational m = 0;
    for (const Item& it : items_) m = max(m, it.h);
    return m;
}

Ordering::Ordering(std::vector<ItemId> order) : order_(std::move(order)) {
    std::vector<char> seen(order_.size(), 0);
    for (ItemId id : order_) {
        if (id >= order_.size() || seen[id]) throw InvalidInput("ordering is not a permutation of 0..n-1");
        seen[id] = 1;
    }
}

Ordering Ordering::identity(std::size_t n) {
    std::vector<ItemId> v(n);
    std::iota(v.begin(), v.end(), 0);
    return Ordering(std::move(v));
}

Ordering Ordering::by_decreasing_width(const Instance& inst) {
    std::vector<ItemId> v(inst.size());
    std::iota(v.begin(), v.end(), 0);
    std::stable_sort(v.begin(), v.end(), [&](ItemId a, ItemId b) {
        const Item& x = inst.item(a);
        const Item& y = inst.item(b);
        if (x.w != y.w) return x.w > y.w;
        return x.h > y.h;
    });
    return Ordering(std::move(v));
}

Ordering Ordering::by_decreasing_size(const Instance& inst) {
    std::vector<ItemId> v(inst.size());
    std::iota(v.begin(), v.end(), 0);
    std::stable_sort(v.begin(), v.end(), [&](ItemId a, ItemId b) {
        const Item& x = inst.item(a);
        const Item& y = inst.item(b);
        Rational ax = x.w * x.h, ay = y.w * y.h;
        if (ax != ay) return ax > ay;
        if (x.h != y.h) return x.h > y.h;
        return x.w > y.w;
    });
    return Ordering(std::move(v));
}

std::size_t support_size(const Ordering& a, const Ordering& b) {
    if (a.size() != b.size()) throw InvalidInput("orderings of different length");
    std::size_t s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] != b[i];
    return s;
}

Packing::Packing(InstancePtr inst, std::vector<Placement> placements)
    : inst_(std::move(inst)), placements_(std::move(placements)) {
    for (const Placement& p : placements_)
        if (p.id >= inst_->size()) throw InvalidInput("placement refers to unknown item " + std::to_string(p.id));
}

Faces Packing::faces(std::size_t k) const {
    const Placement& p = placements_.at(k);
    const Item& it = inst_->item(p.id);
    return {p.x, p.x + it.w, p.y, p.y + it.h};
}

Rational Packing::height() const {
    Rational h = 0;
    for (std::size_t k = 0; k < placements_.size(); ++k) h = max(h, placements_[k].y + inst_->item(placements_[k].id).h);
    return h;
}

bool interiors_overlap(const Faces& a, const Faces& b) {
    return a.lf < b.rf && b.lf < a.rf && a.bf < b.tf && b.bf < a.tf;
}

bool closures_touch(const Faces& a, const Faces& b) {
    return a.lf <= b.rf && b.lf <= a.rf && a.bf <= b.tf && b.bf <= a.tf;
}

FeasibilityReport feasible(const Packing& packing) {
    FeasibilityReport rep;
    const Instance& inst = packing.instance();
    const std::size_t n = packing.size();
    std::vector<char> seen(inst.size(), 0);
    std::vector<Faces> f;
    f.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Placement& p = packing.placements()[k];
        if (seen[p.id]) rep.violations.push_back("item " + std::to_string(p.id) + " placed twice");
        seen[p.id] = 1;
        f.push_back(packing.faces(k));
        if (p.x.sign() < 0) rep.violations.push_back("item " + std::to_string(p.id) + " crosses the left boundary");
        if (p.y.sign() < 0) rep.violations.push_back("item " + std::to_string(p.id) + " is below the strip bottom");
        if (f.back().rf > inst.width()) rep.violations.push_back("item " + std::to_string(p.id) + " crosses the right boundary");
    }
    // sweep in x so only horizontally overlapping pairs are compared
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return f[a].lf < f[b].lf; });
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a + 1; b < n; ++b) {
            const Faces& fa = f[idx[a]];
            const Faces& fb = f[idx[b]];
            if (!(fb.lf < fa.rf)) break;
            if (interiors_overlap(fa, fb)) {
                ItemId i = packing.placements()[idx[a]].id, j = packing.placements()[idx[b]].id;
                rep.violations.push_back("items " + std::to_string(std::min(i, j)) + " and " + std::to_string(std::max(i, j)) + " overlap");
            }
        }
    }
    rep.ok = rep.violations.empty();
    return rep;
}

Rational height(const Packing& packing) { return packing.height(); }

Rational area_lower_bound(const Instance& inst) { return max(inst.total_area() / inst.width(), inst.max_height()); }

}  // namespace blpack
