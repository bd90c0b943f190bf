#include "swe/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace swe {

namespace {
std::atomic<int> g_override{0};
}

int default_threads() {
    if (int o = g_override.load(); o > 0) return o;
    if (const char* s = std::getenv("SWE_THREADS")) {
        const int v = std::atoi(s);
        if (v > 0) return v;
    }
    const unsigned h = std::thread::hardware_concurrency();
    return h > 0 ? static_cast<int>(h) : 1;
}

void set_default_threads(int n) { g_override = n > 0 ? n : 0; }

}  // namespace swe
