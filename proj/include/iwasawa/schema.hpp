#pragma once

#include "iwasawa/json_io.hpp"

#include <string>
#include <vector>

namespace iwasawa::io {

/// The shipped schema files, embedded at build time.
std::vector<std::string> schema_files();
const Json& schema(const std::string& file);

/// Checks doc against the schema at ref ("file#/json/pointer") and throws
/// SchemaError at the first violation. Supports the keywords used by the
/// shipped schemas: $ref, type, enum, const, pattern, minLength, minimum,
/// maximum, minItems, maxItems, items, required, properties and
/// additionalProperties.
void validate(const Json& doc, const std::string& ref);

}  // namespace iwasawa::io
