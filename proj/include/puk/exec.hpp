#pragma once

namespace puk {

// Execution backend for the Monte Carlo kernels. Both backends produce
// bit-identical results; `serial` is the reference implementation.
enum class Execution { serial, parallel };

}  // namespace puk
