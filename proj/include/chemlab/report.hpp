#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chemlab/chemistry.hpp"
#include "chemlab/engine.hpp"
#include "chemlab/error.hpp"
#include "chemlab/quines.hpp"

namespace chemlab {

/// A built-in chemistry by name, or a config file loaded from that path.
std::shared_ptr<const Chemistry> resolve_chemistry(const std::string& name_or_path);

/// "BETA=1,DIST=0.5" -> {BETA: 1, DIST: 0.5}, merged over the defaults.
/// Throws Error(BadRequest) on a malformed entry or a value outside [0, 1].
std::map<std::string, double> parse_weights(std::string_view text,
                                            std::map<std::string, double> base = ReductionConfig::default_weights());

/// Splits on commas and spaces, dropping empty items.
std::vector<std::string> split_list(const std::string& text);

nlohmann::ordered_json match_json(const Match& m, const Chemistry& chem, std::size_t index);
nlohmann::ordered_json verdict_json(const QuineVerdict& v, const Chemistry& chem);
nlohmann::ordered_json profile_json(const QuineProfile& p);
nlohmann::ordered_json error_json(const Error& e);

/// key: value lines.
std::string verdict_text(const QuineVerdict& v, const Chemistry& chem);
std::string profile_text(const QuineProfile& p);

} // namespace chemlab
