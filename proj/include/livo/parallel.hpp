#pragma once

#include <cstddef>

namespace livo {

// Every data-parallel kernel ships in two variants: a plain serial loop that
// serves as the reference, and an OpenMP loop. Both write results into
// per-index slots and reduce serially in index order, so outputs are
// bit-identical regardless of policy or thread count.
enum class ExecPolicy { kSerial, kParallel };

}  // namespace livo
