#include "recnet/parallel.hpp"

#include <cstdlib>
#include <string>

namespace recnet {

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RECNET_THREADS")) {
        try {
            const int value = std::stoi(env);
            if (value > 0) return static_cast<unsigned>(value);
        } catch (const std::exception&) {
            // fall through to hardware concurrency
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

}  // namespace recnet
