#pragma once

// Versioned JSON documents for code specs and repair plans. Split and
// global-efficient specs extend the plain document with extra keys, so a
// reader can tell them apart by which keys are present.

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "htlrc/globalfix.hpp"
#include "htlrc/htcode.hpp"
#include "htlrc/locality.hpp"
#include "htlrc/repair.hpp"

namespace htlrc {

using Json = nlohmann::ordered_json;

inline constexpr int kSpecVersion = 1;

Json to_json(const CodeSpec& spec);
Json to_json(const LrcSpec& spec);
Json to_json(const GlobalLrcSpec& spec);
Json to_json(const RepairPlan& plan);

// Parsers validate what they build; malformed input throws ErrorKind::validation.
CodeSpec code_spec_from_json(const Json& j);
LrcSpec lrc_spec_from_json(const Json& j);
GlobalLrcSpec global_lrc_spec_from_json(const Json& j);

using AnySpec = std::variant<CodeSpec, LrcSpec, GlobalLrcSpec>;

AnySpec any_spec_from_json(const Json& j);
Json to_json(const AnySpec& spec);
LinearCode to_linear_code(const AnySpec& spec);
const CodeSpec& base_of(const AnySpec& spec);

/// Compact dump with the fixed key order; the store hashes this string.
std::string canonical(const Json& j);

Json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const Json& j);

}  // namespace htlrc
