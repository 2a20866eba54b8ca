#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "blpack/analysis.hpp"
#include "blpack/core.hpp"
#include "blpack/engine.hpp"
#include "blpack/generators.hpp"
#include "blpack/local_search.hpp"

namespace blpack {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct InstanceMeta {
    std::string construction;
    std::map<std::string, std::string> params;
};

Json instance_to_json(const Instance& inst, const std::optional<InstanceMeta>& meta = std::nullopt);
// Throws InvalidInput on malformed content.
Instance instance_from_json(const Json& j, InstanceMeta* meta = nullptr);

Json ordering_to_json(const Ordering& o);
Ordering ordering_from_json(const Json& j);

// Placements are written in listed order; a trace also records its ordering.
Json packing_to_json(const Packing& p);
Json trace_to_json(const PackingTrace& t);
Packing packing_from_json(const Json& j);
// Accepts a trace file, or a packing file whose placement order is taken as the ordering.
PackingTrace trace_from_json(const Json& j);

Json to_json(const FeasibilityReport& r);
Json to_json(const BottomLeftReport& r);
Json to_json(const PieceVerdict& v);
Json to_json(const TrenchReport& r);
Json to_json(const BoundReport& r);
Json to_json(const SearchResult& r);
Json to_json(const SearchTrace& t);

std::string read_text(const std::string& path);      // throws IoError
void write_text(const std::string& path, const std::string& text);
Json read_json(const std::string& path);             // throws IoError / InvalidInput
void write_json(const std::string& path, const Json& j);
std::string dump(const Json& j);

// One <rect> per placed item, strip outline, y flipped; 12 significant digits.
std::string render_svg(const Packing& p);

// Random square instance with a random ordering: 4..12 items, sizes p/q with
// p in 1..20 and q in 1..4, width in [max size, 4 max size] on a 1/4 grid of
// the max size.
struct RandomCase {
    InstancePtr instance;
    Ordering ordering;
};
RandomCase random_square_case(std::mt19937_64& rng);
std::vector<RandomCase> random_corpus(std::size_t count, std::uint64_t seed);

}  // namespace blpack
