#pragma once

namespace mafh {

// Applies MAFH_THREADS (0 or unset = OpenMP default). Returns the thread
// count in effect afterwards.
int configure_threads_from_env();

void set_threads(int n);
int max_threads();

} // namespace mafh
