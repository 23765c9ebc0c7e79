#pragma once

#include "quadrep/serialize.hpp"

#include <iosfwd>

namespace quadrep {

enum ExitCode : int { kExitOk = 0, kExitNo = 2, kExitUnknown = 3, kExitBudget = 4, kExitInput = 5 };

struct RunOptions {
  unsigned long seed = 0;
  unsigned jobs = 1;
};

struct TaskResult {
  Json output;
  int exit_code = kExitOk;
};

/// Runs one task. `kind` is a subcommand name, `input` the instance JSON and
/// `args` its options (e.g. {"prime": 3, "alpha": "5"}). Errors are mapped to
/// exit codes with {"error": ...} as output.
TaskResult run_task(const std::string& kind, const Json& input, const Json& args, const RunOptions& opt);

/// One corpus entry: {"id", "kind", "input", "args", "expected", "provenance"}.
/// `expected` maps dotted paths of the output (e.g. "certificate.place") to values.
struct CorpusEntry {
  std::string id;
  std::string kind;
  Json input;
  Json args;
  Json expected;
  Json provenance;
};

std::vector<CorpusEntry> load_corpus(const std::string& dir);

/// Runs every entry and writes a pass/fail table; returns the number of mismatches.
size_t verify_corpus(const std::vector<CorpusEntry>& entries, const RunOptions& opt, std::ostream& out);

/// Value at a dotted path ("a.b.0"), or null.
Json json_at(const Json& j, const std::string& path);

}  // namespace quadrep
