#include "mafh/parallel.hpp"

#include "mafh/error.hpp"

#include <cstdlib>
#include <string>

#include <omp.h>

namespace mafh {

int configure_threads_from_env()
{
    const char* raw = std::getenv("MAFH_THREADS");
    if (raw != nullptr && *raw != '\0') {
        int n = 0;
        try {
            std::size_t used = 0;
            n = std::stoi(raw, &used);
            require(used == std::string(raw).size(), "");
        } catch (const std::exception&) {
            throw Error(std::string("MAFH_THREADS must be a non-negative integer, got '") + raw + "'");
        }
        require(n >= 0, "MAFH_THREADS must be a non-negative integer");
        if (n > 0) set_threads(n);
    }
    return max_threads();
}

void set_threads(int n)
{
    require(n >= 1, "thread count must be positive");
    omp_set_num_threads(n);
}

int max_threads()
{
    return omp_get_max_threads();
}

} // namespace mafh
