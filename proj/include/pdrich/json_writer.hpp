#ifndef PDRICH_JSON_WRITER_HPP
#define PDRICH_JSON_WRITER_HPP

#include <ostream>

#include <json.hpp>

namespace pdrich {

/// Serializes like nlohmann::json::dump(indent) but prints floating-point
/// numbers with 17 significant digits. Non-finite numbers become null.
void write_json(std::ostream& out, const nlohmann::ordered_json& value, int indent = 2);

}  // namespace pdrich

#endif
