#pragma once

#include "bvx/bratteli.hpp"
#include "bvx/ifs.hpp"

#include <string>

namespace bvx {

/// Diagram file format: {"levels": [[names...]...], "edges":
/// [[{"source","range","order","label"}...]...], "repeat_from": int|null}.
/// Serialization is canonical: sorted keys, lowest-terms rationals.
OrderedBratteliDiagram parse_diagram_json(const std::string& text);
std::string diagram_to_json(const OrderedBratteliDiagram& d);

/// IFS file format: {"kind":"similitude","dimension":n,"ratio":"p/q",
/// "maps":[{"offset":["p/q",...]},...]} or {"kind":"digit","base":m,
/// "dimension":n,"digits":[[d1,...],...]}.
ContractionSystem parse_ifs_json(const std::string& text);
std::string ifs_to_json(const ContractionSystem& sys);

/// Loads a diagram from a path, or builds the "odometerN" preset.
OrderedBratteliDiagram load_diagram(const std::string& path_or_preset);
/// Loads an IFS from a path, or any preset name known to preset().
ContractionSystem load_ifs(const std::string& path_or_preset);

std::string read_file(const std::string& path);
/// Writes through a temp file in the same directory, then renames.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace bvx
