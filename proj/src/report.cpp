#include "procap/report.hpp"

namespace procap {

const IndexValue* CapabilityReport::find_index(const std::string& name) const {
    for (const auto& iv : indices)
        if (iv.name == name) return &iv;
    return nullptr;
}

const std::vector<std::string>& canonical_index_names() {
    static const std::vector<std::string> names = {
        "Cp",  "Cp*",  "Cpk", "Cpu", "Cpl", "Cpk*", "Cpm", "Cpm*", "Cpmk", "Cpmk*",
        "Pp",  "Ppu",  "Ppl", "Ppk", "Ppm", "Ppmk", "CNp", "CNpk", "CNpm", "CNpmk",
        "PPM",
    };
    return names;
}

} // namespace procap
