#pragma once

/**
 * @file acceptance.hpp
 * @brief Full acceptance suite: one pass/fail line per criterion, written to
 *        the given stream.  Deterministic output (no timestamps), shared by
 *        the standalone acceptance binary and the CLI selftest subcommand.
 */

#include <ostream>

namespace mk {

/// Runs every acceptance criterion; returns true when all pass.
bool run_acceptance(std::ostream& out);

} // namespace mk
