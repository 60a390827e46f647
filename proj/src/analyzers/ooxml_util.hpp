#pragma once

// Helpers shared by the Word and Excel analyzers.

#include <map>
#include <string>
#include <string_view>

#include "phishlens/container/zip.hpp"

namespace phishlens::detail {

struct Relationship {
    std::string id;
    std::string type;
    std::string target;  // resolved package path unless external
    bool external = false;
};

/// "word/document.xml" -> "word/_rels/document.xml.rels"
std::string rels_path_for(std::string_view part);

/// Resolves `target` relative to the directory of `part`, collapsing "." and "..".
std::string resolve_part_target(std::string_view part, std::string_view target);

/// Parses the relationship part for `part` (missing part yields an empty map).
std::map<std::string, Relationship> read_relationships(const container::ZipArchive& zip, std::string_view part);

std::string_view extension_of(std::string_view path);

}  // namespace phishlens::detail
