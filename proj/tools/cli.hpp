#pragma once
// Flag parsing and dispatch for the axiscat tool.
#include <axiscat/study.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace axiscat::cli
{
enum ExitCode
{
    kOk = 0,
    kSolveFailure = 1,
    kUsage = 2
};

/// Parses flags (without the program name) into a study spec; throws study::UsageError.
/// Unset sweep parameters take the study's defaults.
study::StudySpec parse_args(const std::vector<std::string>& args);

/// Runs the tool. CSV goes to --out (or `out` when unset), messages to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
} // namespace axiscat::cli
