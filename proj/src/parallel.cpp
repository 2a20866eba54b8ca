#include "blpack/parallel.hpp"

#include <cstdlib>
#include <string>

namespace blpack {

unsigned thread_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const char* env = std::getenv("BLPACK_THREADS");
    if (!env || !*env) return hw;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || v < 0) return hw;
    return v == 0 ? hw : static_cast<unsigned>(v);
}

}  // namespace blpack
