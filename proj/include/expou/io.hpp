#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "expou/model.hpp"

namespace expou {

// Round-trippable decimal rendering used for every numeric field the tool
// emits, so identical runs produce identical bytes.
std::string fmt_g17(double v);

using MetaList = std::vector<std::pair<std::string, std::string>>;

// CSV layout: '# key: value' metadata lines, a header row, then the data
// section. Only the data section is covered by the byte-stability contract
// (metadata carries wall time).
void write_csv(std::ostream& out, const MetaList& meta,
               const std::vector<std::string>& columns,
               const std::vector<const std::vector<double>*>& data);

// Flat JSON object {"s0": ..., "mu": ..., ...} for parameter files.
std::string params_to_json(const ModelParams& p);

// Reads the same flat layout; missing keys keep their defaults.
RawParams params_from_json_file(const std::string& path);

}  // namespace expou
