#pragma once

#include <string>
#include <vector>

#include "procap/types.hpp"

namespace procap {

struct Dimension {
    std::string id;
    ToleranceSpec spec;
    MeasurementSeries series;
};

/// An ordered collection of measured dimensions with unique ids. Series may
/// differ in length.
struct Dataset {
    std::vector<Dimension> dimensions;

    const Dimension* find(const std::string& id) const;
};

} // namespace procap
