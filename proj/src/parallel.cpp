#include "oflab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace oflab {

int worker_count() {
    if (const char* env = std::getenv("OFLAB_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (const std::exception&) {
        }
    }
    const auto hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace oflab
