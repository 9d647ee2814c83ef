#pragma once

namespace mub {

/// Selects the serial reference path or the OpenMP path of a kernel. Both must
/// produce identical results.
enum class Exec { Serial, Parallel };

}  // namespace mub
