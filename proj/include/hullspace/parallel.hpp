#pragma once

namespace hullspace {

/// Thread count for OpenMP kernels: HULLSPACE_THREADS if set and positive,
/// otherwise the OpenMP default. Read once per process unless overridden.
int kernel_threads();

/// Overrides the thread cap (0 restores the environment/default value).
void set_kernel_threads(int n);

}  // namespace hullspace
