#pragma once

namespace polfocus::cli {

/// Entry point of the polfocus command-line tool.
/// Exit codes: 0 success (including --help), 2 configuration error (bad or
/// missing parameters, unreadable config file, precondition violations),
/// 3 quadrature non-convergence, 1 any other failure.
int run(int argc, const char* const* argv);

}  // namespace polfocus::cli
