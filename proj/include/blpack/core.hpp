#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "blpack/rational.hpp"

namespace blpack {

using ItemId = std::uint32_t;

class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Item {
    ItemId id = 0;
    Rational w;
    Rational h;

    bool is_square() const { return w == h; }
};

enum class InstanceKind { rectangles, squares };

class Instance {
public:
    // Throws InvalidInput on non-positive sizes, items wider than the strip,
    // or ids that are not exactly 0..n-1 in order.
    Instance(Rational width, std::vector<Item> items);

    static Instance from_sizes(Rational width, const std::vector<std::pair<Rational, Rational>>& sizes);
    static Instance from_squares(Rational width, const std::vector<Rational>& sizes);

    const Rational& width() const { return width_; }
    const std::vector<Item>& items() const { return items_; }
    const Item& item(ItemId id) const { return items_.at(id); }
    std::size_t size() const { return items_.size(); }
    InstanceKind kind() const { return kind_; }
    bool squares_only() const { return kind_ == InstanceKind::squares; }

    Rational total_area() const;
    Rational max_height() const;

private:
    Rational width_;
    std::vector<Item> items_;
    InstanceKind kind_ = InstanceKind::squares;
};

using InstancePtr = std::shared_ptr<const Instance>;

class Ordering {
public:
    Ordering() = default;
    explicit Ordering(std::vector<ItemId> order);  // throws InvalidInput unless a permutation

    static Ordering identity(std::size_t n);
    static Ordering by_decreasing_width(const Instance& inst);
    static Ordering by_decreasing_size(const Instance& inst);

    const std::vector<ItemId>& ids() const { return order_; }
    std::size_t size() const { return order_.size(); }
    ItemId operator[](std::size_t i) const { return order_[i]; }

    friend auto operator<=>(const Ordering&, const Ordering&) = default;

private:
    std::vector<ItemId> order_;
};

// Number of positions at which two orderings differ.
std::size_t support_size(const Ordering& a, const Ordering& b);

struct Placement {
    ItemId id = 0;
    Rational x;
    Rational y;

    friend bool operator==(const Placement&, const Placement&) = default;
};

struct Faces {
    Rational lf, rf, bf, tf;
};

class Packing {
public:
    Packing() = default;
    Packing(InstancePtr inst, std::vector<Placement> placements);

    const Instance& instance() const { return *inst_; }
    const InstancePtr& instance_ptr() const { return inst_; }
    const std::vector<Placement>& placements() const { return placements_; }
    std::size_t size() const { return placements_.size(); }
    bool complete() const { return placements_.size() == inst_->size(); }

    Faces faces(std::size_t k) const;  // faces of the k-th listed placement
    Rational height() const;

private:
    InstancePtr inst_;
    std::vector<Placement> placements_;
};

struct FeasibilityReport {
    bool ok = true;
    std::vector<std::string> violations;
};

FeasibilityReport feasible(const Packing& packing);
Rational height(const Packing& packing);
Rational area_lower_bound(const Instance& inst);

// True iff the open interiors of the two axis-aligned boxes intersect.
bool interiors_overlap(const Faces& a, const Faces& b);
// True iff the closed boxes intersect.
bool closures_touch(const Faces& a, const Faces& b);

}  // namespace blpack
