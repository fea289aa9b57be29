#pragma once

namespace hvpol {

// Kernels that loop over independent work items (grid points, MC streams,
// lattice rows, fit replicas) take an Exec. Both variants produce
// bit-identical results; serial is kept as the reference path.
enum class Exec { serial, parallel };

int max_threads();

}  // namespace hvpol
