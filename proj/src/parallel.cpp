#include "casesens/parallel.hpp"

#include <cstdlib>
#include <string>

namespace casesens {

unsigned default_thread_count() {
    if (const char* env = std::getenv("CASESENS_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n >= 1) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

}  // namespace casesens
