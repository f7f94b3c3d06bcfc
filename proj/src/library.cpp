#include "chemlab/library.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "chemlab/chemistry.hpp"
#include "chemlab/error.hpp"

namespace chemlab {

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool valid_id(const std::string& id)
{
    return !id.empty() && std::all_of(id.begin(), id.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    }) && id.find("..") == std::string::npos;
}

LibraryEntry read_entry(const std::filesystem::path& dir, const std::string& id)
{
    LibraryEntry e;
    e.id = id;
    e.mol_text = slurp(dir / (id + ".mol"));
    e.chemistry = "chemlambda-v2";
    std::istringstream lines(e.mol_text);
    for (std::string line; std::getline(lines, line);) {
        const std::string key = "# chemistry:";
        if (line.starts_with(key)) {
            auto v = line.substr(key.size());
            v.erase(0, v.find_first_not_of(" \t"));
            v.erase(v.find_last_not_of(" \t\r") + 1);
            e.chemistry = v;
            break;
        }
    }
    if (auto txt = dir / (id + ".txt"); std::filesystem::exists(txt))
        e.comment = slurp(txt);
    e.molecule(); // parse check
    return e;
}

} // namespace

MolPattern LibraryEntry::molecule() const
{
    return parse_mol(mol_text, builtin(chemistry).types(), detect_dialect(mol_text));
}

std::vector<LibraryEntry> load_library(const std::filesystem::path& dir)
{
    std::vector<LibraryEntry> out;
    if (!std::filesystem::is_directory(dir))
        return out;
    std::vector<std::string> ids;
    for (const auto& f : std::filesystem::directory_iterator(dir))
        if (f.path().extension() == ".mol")
            ids.push_back(f.path().stem().string());
    std::sort(ids.begin(), ids.end());
    for (const auto& id : ids)
        out.push_back(read_entry(dir, id));
    return out;
}

LibraryEntry load_library_entry(const std::filesystem::path& dir, const std::string& id)
{
    if (!valid_id(id) || !std::filesystem::exists(dir / (id + ".mol")))
        throw Error(ErrorCode::NotFound, "no library entry '" + id + "'");
    return read_entry(dir, id);
}

std::filesystem::path default_library_dir()
{
#ifdef CHEMLAB_LIBRARY_DIR
    return CHEMLAB_LIBRARY_DIR;
#else
    return "library";
#endif
}

} // namespace chemlab
