#ifndef WSSPEC_PARAM_IO_HPP
#define WSSPEC_PARAM_IO_HPP

#include "wsspec/potential.hpp"

#include <map>
#include <string>
#include <string_view>

namespace wsspec {

/// Flat key=value parameter file. Blank lines and lines starting with '#'
/// are ignored; whitespace around keys and values is trimmed. Duplicate
/// keys are an error.
using KeyValueMap = std::map<std::string, std::string, std::less<>>;

KeyValueMap parse_key_values(std::string_view text);

struct ParameterSet {
  PotentialSpec potential;
  UnitsConfig units;
  bool has_variant = false;
};

/// Keys recognized by the potential schema.
bool is_potential_key(std::string_view key);

/// Applies the potential keys of `kv` onto `base`. Keys outside the schema
/// are ignored here; callers decide whether they are an error.
ParameterSet apply_potential_keys(const KeyValueMap &kv, ParameterSet base = {});

ParameterSet parse_parameter_set(std::string_view text);

/// Writes every key of the schema; q and C only when overridden so that a
/// re-parse reproduces the same derivations.
std::string serialize_parameter_set(const ParameterSet &params);

/// Strict double parse of a whole token (no trailing garbage).
double parse_double(std::string_view token, std::string_view what);

} // namespace wsspec

#endif
