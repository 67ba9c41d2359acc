#include "normsim/loader.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json_common.hpp"
#include "normsim/errors.hpp"

namespace normsim {

namespace {

using detail::Json;
using detail::reject_unknown_keys;

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::optional<ValueTag> parse_value_tag(const std::string& s) {
  if (s == "boolean") return ValueTag::Boolean;
  if (s == "number") return ValueTag::Number;
  if (s == "string") return ValueTag::String;
  return std::nullopt;
}

std::optional<EngineMode> parse_mode(const std::string& s) {
  if (s == "prohibition") return EngineMode::Prohibition;
  if (s == "permission") return EngineMode::Permission;
  return std::nullopt;
}

std::optional<DeonticType> parse_deontic(const std::string& s) {
  if (s == "prohibition") return DeonticType::Prohibition;
  if (s == "permission") return DeonticType::Permission;
  return std::nullopt;
}

std::optional<Issuer> parse_issuer(const std::string& s) {
  if (s == "self") return Issuer::Self;
  if (s == "society") return Issuer::Society;
  if (s == "organization") return Issuer::Organization;
  return std::nullopt;
}

// Parses an expression source field, pushing a diagnostic instead of
// throwing. Returns null on failure.
ExprPtr parse_expr_field(const std::string& source, const std::string& norm_id,
                         const char* which,
                         std::vector<std::string>& problems) {
  try {
    return parse_source(normalize_bool_literals(source));
  } catch (const LexError& e) {
    problems.push_back("norm '" + norm_id + "': " + which + ": " + e.what() +
                       " (at offset " + std::to_string(e.offset) + ")");
  } catch (const ParseError& e) {
    problems.push_back("norm '" + norm_id + "': " + which + ": " + e.what() +
                       " (at offset " + std::to_string(e.offset) + ")");
  }
  return nullptr;
}

StateSchema parse_schema(const Json& j, std::vector<std::string>& problems) {
  StateSchema schema;
  if (!j.is_object()) {
    problems.push_back("schema: expected an object");
    return schema;
  }
  reject_unknown_keys(j, {"identifiers", "functions"}, "schema", problems);

  if (j.contains("identifiers")) {
    const Json& ids = j["identifiers"];
    if (!ids.is_object()) {
      problems.push_back("schema.identifiers: expected an object");
    } else {
      for (const auto& item : ids.items()) {
        if (!item.value().is_string()) {
          problems.push_back("schema.identifiers." + item.key() +
                             ": expected a type name string");
          continue;
        }
        auto tag = parse_value_tag(item.value().get<std::string>());
        if (!tag) {
          problems.push_back("schema.identifiers." + item.key() +
                             ": unknown type '" +
                             item.value().get<std::string>() +
                             "' (expected boolean, number or string)");
          continue;
        }
        schema.identifiers[item.key()] = *tag;
      }
    }
  }
  if (j.contains("functions")) {
    const Json& fns = j["functions"];
    if (!fns.is_object()) {
      problems.push_back("schema.functions: expected an object");
    } else {
      for (const auto& item : fns.items()) {
        if (!item.value().is_number_unsigned()) {
          problems.push_back("schema.functions." + item.key() +
                             ": expected a non-negative integer arity");
          continue;
        }
        schema.functions[item.key()] = item.value().get<std::size_t>();
      }
    }
  }
  return schema;
}

}  // namespace

std::string normalize_bool_literals(const std::string& source) {
  std::string out;
  out.reserve(source.size());
  std::size_t i = 0;
  while (i < source.size()) {
    const bool boundary_before = i == 0 || !ident_char(source[i - 1]);
    if (boundary_before && source.compare(i, 4, "True") == 0 &&
        (i + 4 == source.size() || !ident_char(source[i + 4]))) {
      out += "true";
      i += 4;
    } else if (boundary_before && source.compare(i, 5, "False") == 0 &&
               (i + 5 == source.size() || !ident_char(source[i + 5]))) {
      out += "false";
      i += 5;
    } else {
      out += source[i];
      ++i;
    }
  }
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path + "'");
  return buffer.str();
}

NormFile load_norm_file(const std::string& path) {
  return parse_norm_file(read_text_file(path), path);
}

NormFile parse_norm_file(const std::string& text, const std::string& origin) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(origin + ": " + e.what());
  }

  std::vector<std::string> problems;
  if (!root.is_object()) {
    throw ValidationError("invalid norm file: " + origin,
                          {origin + ": top level must be an object"});
  }
  reject_unknown_keys(root, {"mode", "schema", "norms", "actions"}, origin,
                      problems);

  EngineMode mode = EngineMode::Prohibition;
  std::string mode_str = "prohibition";
  if (!root.contains("mode") || !root["mode"].is_string()) {
    problems.push_back("missing or non-string 'mode'");
  } else if (auto m = parse_mode(root["mode"].get<std::string>())) {
    mode = *m;
    mode_str = root["mode"].get<std::string>();
  } else {
    problems.push_back("mode must be 'prohibition' or 'permission', got '" +
                       root["mode"].get<std::string>() + "'");
  }

  StateSchema schema;
  if (root.contains("schema")) schema = parse_schema(root["schema"], problems);

  NormFile file{mode, schema, NormStore(mode)};

  if (root.contains("actions")) {
    const Json& actions = root["actions"];
    if (!actions.is_object()) {
      problems.push_back("actions: expected an object mapping name to domain");
    } else {
      for (const auto& item : actions.items()) {
        if (!item.value().is_string()) {
          problems.push_back("actions." + item.key() +
                             ": expected a domain string");
          continue;
        }
        try {
          file.store.register_action(item.key(),
                                     DomainId{item.value().get<std::string>()});
        } catch (const DuplicateActionError& e) {
          problems.push_back(e.what());
        }
      }
    }
  }

  if (!root.contains("norms") || !root["norms"].is_array()) {
    problems.push_back("missing or non-array 'norms'");
  } else {
    std::size_t index = 0;
    for (const Json& entry : root["norms"]) {
      const std::string slot = "norms[" + std::to_string(index) + "]";
      ++index;
      if (!entry.is_object()) {
        problems.push_back(slot + ": expected an object");
        continue;
      }
      reject_unknown_keys(entry,
                          {"id", "type", "condition", "activation", "reward",
                           "penalty", "roles", "domain", "inviolable",
                           "issuer"},
                          slot, problems);

      Norm norm;
      if (entry.contains("id") && entry["id"].is_string())
        norm.id = entry["id"].get<std::string>();
      else
        problems.push_back(slot + ": missing or non-string 'id'");
      const std::string& id = norm.id.empty() ? slot : norm.id;

      norm.deontic_type = deontic_type_for(mode);
      if (!entry.contains("type") || !entry["type"].is_string()) {
        problems.push_back("norm '" + id + "': missing or non-string 'type'");
      } else if (auto t = parse_deontic(entry["type"].get<std::string>())) {
        norm.deontic_type = *t;
        if (*t != deontic_type_for(mode))
          problems.push_back("norm '" + id + "': mode conflict: file mode is " +
                             mode_str + ", norm is a " +
                             entry["type"].get<std::string>());
      } else {
        problems.push_back("norm '" + id +
                           "': type must be 'prohibition' or 'permission'");
      }

      bool condition_parse_failed = false;
      if (entry.contains("condition") && entry["condition"].is_string()) {
        norm.condition = parse_expr_field(
            entry["condition"].get<std::string>(), id, "condition", problems);
        condition_parse_failed = norm.condition == nullptr;
      } else {
        problems.push_back("norm '" + id +
                           "': missing or non-string 'condition'");
        condition_parse_failed = true;
      }
      if (entry.contains("activation")) {
        if (!entry["activation"].is_string())
          problems.push_back("norm '" + id + "': non-string 'activation'");
        else
          norm.activation = parse_expr_field(
              entry["activation"].get<std::string>(), id, "activation",
              problems);
      }

      if (entry.contains("reward") && entry["reward"].is_number())
        norm.reward = entry["reward"].get<double>();
      else
        problems.push_back("norm '" + id +
                           "': missing or non-numeric 'reward'");
      if (entry.contains("penalty") && entry["penalty"].is_number())
        norm.penalty = entry["penalty"].get<double>();
      else
        problems.push_back("norm '" + id +
                           "': missing or non-numeric 'penalty'");

      if (entry.contains("roles")) {
        if (!entry["roles"].is_array()) {
          problems.push_back("norm '" + id + "': 'roles' must be an array");
        } else {
          std::set<RoleId> roles;
          for (const Json& role : entry["roles"]) {
            if (!role.is_string()) {
              problems.push_back("norm '" + id + "': non-string role");
              continue;
            }
            roles.insert(RoleId{role.get<std::string>()});
          }
          norm.roles = std::move(roles);
        }
      }
      if (entry.contains("domain")) {
        if (entry["domain"].is_string())
          norm.domain = DomainId{entry["domain"].get<std::string>()};
        else
          problems.push_back("norm '" + id + "': non-string 'domain'");
      }
      if (entry.contains("inviolable")) {
        if (entry["inviolable"].is_boolean())
          norm.inviolable = entry["inviolable"].get<bool>();
        else
          problems.push_back("norm '" + id + "': 'inviolable' must be a bool");
      }
      if (!entry.contains("issuer") || !entry["issuer"].is_string()) {
        problems.push_back("norm '" + id + "': missing or non-string 'issuer'");
      } else if (auto iss = parse_issuer(entry["issuer"].get<std::string>())) {
        norm.issuer = *iss;
      } else {
        problems.push_back(
            "norm '" + id +
            "': issuer must be 'self', 'society' or 'organization'");
      }

      const ValidationReport report = validate_norm(norm, schema);
      for (const Diagnostic& d : report.diagnostics()) {
        // The parse failure above already explains a null condition.
        if (condition_parse_failed && d.message == "missing condition")
          continue;
        problems.push_back(d.render());
      }

      if (file.store.find(norm.id)) {
        problems.push_back("duplicate norm id '" + norm.id + "'");
        continue;
      }
      if (problems.empty()) file.store.add_norm(std::move(norm));
    }
  }

  if (!problems.empty())
    throw ValidationError("invalid norm file: " + origin, std::move(problems));
  return file;
}

}  // namespace normsim
