#pragma once

#include <string>

#include "normsim/engine.hpp"

namespace normsim {

// A norm file, parsed and validated. The store carries the norms in file
// order plus the regulated-action registry from the "actions" section.
struct NormFile {
  EngineMode mode;
  StateSchema schema;
  NormStore store;
};

// File layout (JSON):
//   {
//     "mode": "prohibition" | "permission",
//     "schema": {
//       "identifiers": { name: "boolean" | "number" | "string", ... },
//       "functions":   { name: arity, ... }
//     },
//     "norms": [
//       {
//         "id": string, "type": "prohibition" | "permission",
//         "condition": string,            expression source
//         "activation": string,           optional, default always active
//         "reward": number >= 0, "penalty": number <= 0,
//         "roles": [string, ...],         optional, default all roles
//         "domain": string,               optional, default "DEFAULT"
//         "inviolable": bool,             optional, default true
//         "issuer": "self" | "society" | "organization"
//       }, ...
//     ],
//     "actions": { name: domain, ... }    optional
//   }
// Keys starting with "_" are ignored everywhere; other unknown keys are
// errors. "True"/"False" inside expression sources are normalized to the
// lowercase literals before parsing.
//
// Throws IoError when the file cannot be read, FormatError when the text is
// not JSON, ValidationError carrying every problem found otherwise.
NormFile load_norm_file(const std::string& path);
NormFile parse_norm_file(const std::string& text, const std::string& origin);

// Word-boundary normalization of Python-style boolean literals.
std::string normalize_bool_literals(const std::string& source);

// Reads a whole file; IoError on failure.
std::string read_text_file(const std::string& path);

}  // namespace normsim
