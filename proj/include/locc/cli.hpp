#pragma once

// Batch front end: set documents in, JSON reports out.
//
// A set document is a JSON object
//   {"D": 3, "encoding": "bell_indices", "payload": [[0,0],[1,0]]}
//   {"D": 2, "encoding": "explicit_unitaries",
//    "payload": [[[[1,0],[0,0]], [[0,0],[1,0]]], ...], "tolerance": 1e-9}
// where explicit matrices are row lists of [re, im] pairs.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "locc/copying.hpp"
#include "locc/weyl.hpp"

namespace locc::cli {

enum class Encoding { BellIndices, ExplicitUnitaries };

struct SetDocument {
  int dim = 0;
  Encoding encoding = Encoding::BellIndices;
  std::vector<BellIndex> indices;
  std::vector<CMatrix> matrices;
  std::optional<double> tolerance;

  friend bool operator==(const SetDocument& a, const SetDocument& b);
};

/// Throws Error(ParseError) on malformed text and Error(ValidationError) when
/// an invariant fails; the message names the offending field or entry.
/// `tolerance_override` replaces the document's tolerance for validation.
SetDocument parse_set_document(std::string_view text, std::optional<double> tolerance_override = std::nullopt);

nlohmann::ordered_json to_json(const SetDocument& doc);

/// Members of the document as unitaries.
std::vector<Unitary> members(const SetDocument& doc, Tolerance tol);

struct Flags {
  std::optional<double> tolerance;
  std::uint64_t seed = 0;
  std::uint64_t rounds = 10000;
  bool timings = false;
};

struct CommandResult {
  nlohmann::ordered_json report;
  int exit_code = 0;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitVerification = 2;

const std::vector<std::string>& command_names();

/// Runs one command on a parsed document. Input problems surface as Error
/// exceptions (exit code 1 at the process level); verification failures are
/// reported with exit code 2.
CommandResult run_command(std::string_view command, const SetDocument& doc, const Flags& flags);

/// Parses, runs and serializes; never throws. Diagnostics go to `diagnostics`.
CommandResult run_text(std::string_view command, std::string_view text, const Flags& flags, std::string& diagnostics);

/// Report serialization used by the CLI (two-space indent, trailing newline).
std::string serialize(const nlohmann::ordered_json& report);

}  // namespace locc::cli
