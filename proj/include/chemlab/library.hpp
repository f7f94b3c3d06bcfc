#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chemlab/mol.hpp"

namespace chemlab {

/// A named graph shipped as <id>.mol (with a "# chemistry: NAME" header
/// line) and an optional <id>.txt comment.
struct LibraryEntry {
    std::string id;
    std::string mol_text;
    std::string chemistry;
    std::string comment;

    MolPattern molecule() const;
};

/// Entries of a library directory, sorted by id. Every entry is parsed
/// under its chemistry; a bad entry throws.
std::vector<LibraryEntry> load_library(const std::filesystem::path& dir);

/// Throws Error(NotFound).
LibraryEntry load_library_entry(const std::filesystem::path& dir, const std::string& id);

/// The library directory of the source tree this binary was built from.
std::filesystem::path default_library_dir();

} // namespace chemlab
