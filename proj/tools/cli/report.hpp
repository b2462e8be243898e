#pragma once

#include <filesystem>
#include <iosfwd>

namespace lab {

// Reads every metadata sidecar in `dir`, prints one line per acceptance
// criterion and writes report.csv there. Returns 0 when nothing failed and 4
// otherwise; missing experiments are SKIPPED.
int report(const std::filesystem::path& dir, std::ostream& out);

}  // namespace lab
