#include "fdp/parallel.hpp"

#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fdp::par {

namespace {
int g_threads = 0;  // 0 = unset, fall back to env/OpenMP

int env_threads() {
    if (const char* s = std::getenv("FDP_THREADS")) {
        try {
            const int k = std::stoi(s);
            if (k > 0) return k;
        } catch (...) {
        }
    }
    return 0;
}
}  // namespace

void set_threads(int k) { g_threads = k > 0 ? k : 0; }

int threads() {
    if (g_threads > 0) return g_threads;
    if (const int k = env_threads(); k > 0) return k;
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

bool openmp_enabled() {
#ifdef _OPENMP
    return true;
#else
    return false;
#endif
}

}  // namespace fdp::par
