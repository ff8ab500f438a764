#pragma once

namespace kpk::cli {

/// Entry point for the koszulpk tool. Exit codes: 0 pass, 1 property
/// violation, 2 input error, 3 inconclusive at the degree bound.
int run(int argc, const char* const* argv);

} // namespace kpk::cli
