#include "cryodiff/parallel.hpp"

#include <algorithm>
#include <thread>

namespace cryodiff {

namespace {
int g_threads = []() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}();
}  // namespace

int num_threads() { return g_threads; }

void set_num_threads(int n) { g_threads = std::max(1, n); }

}  // namespace cryodiff
