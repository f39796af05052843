#ifndef RTGMAP_MAPPING_TEXT_HPP
#define RTGMAP_MAPPING_TEXT_HPP

#include <optional>
#include <string>

#include "rtgmap/mapping.hpp"

namespace rtgmap {

/// A mapping file: optional `source:` / `target:` headers naming grammar
/// files, then one op per line, `#` comments.
struct MappingFile {
    std::optional<std::string> source_ref;
    std::optional<std::string> target_ref;
    EditScript script;
};

MappingFile parse_mapping_file(const std::string& text);
std::string serialize_mapping_file(const MappingFile& m);

} // namespace rtgmap

#endif
