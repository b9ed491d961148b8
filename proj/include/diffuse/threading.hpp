#pragma once

namespace diffuse {

/// Applies the DIFFUSE_THREADS environment variable (0 or unset = OpenMP
/// default). Call once at process start; returns the effective cap.
int configure_threads_from_env();

} // namespace diffuse
