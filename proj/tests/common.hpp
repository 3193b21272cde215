#pragma once

#include <fstream>
#include <iomanip>
#include <string>

#include "lhit/walk_law.hpp"

namespace lhit_test {

// Asymmetric validated law used for cross-checks beside the simple walk.
inline lhit::WalkLaw asym_law() {
    lhit::WalkLaw law;
    law.support = {{2, 0}, {-1, 0}, {0, 1}, {0, -1}};
    law.probs = {1.0 / 6, 1.0 / 3, 0.25, 0.25};
    law.name = "asym";
    return law;
}

// |dy| up to 2: exercises the strip fallback of the axis transform.
inline lhit::WalkLaw tall_law() {
    lhit::WalkLaw law;
    law.support = {{1, 0}, {-1, 0}, {0, 1}, {0, -2}};
    law.probs = {0.25, 0.25, 1.0 / 3, 1.0 / 6};
    law.name = "tall";
    return law;
}

inline std::string write_law_file(const std::string& path,
                                  const lhit::WalkLaw& law) {
    std::ofstream out(path);
    out << std::setprecision(17);
    for (std::size_t i = 0; i < law.support.size(); ++i)
        out << law.support[i].x << " " << law.support[i].y << " "
            << law.probs[i] << "\n";
    return path;
}

}  // namespace lhit_test
