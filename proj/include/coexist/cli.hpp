#pragma once

#include <iosfwd>

namespace coexist {

/**
 * Entry point of the sched_sim tool. Returns 0 on success, 1 on a run or
 * I/O failure and 2 on a usage error (including no arguments).
 *
 * Writes `summary.csv` and one `ecdf_<scheduler>_<value>.csv` per cell into
 * the output directory.
 */
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace coexist
