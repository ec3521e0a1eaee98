#include "snlab/mixed_norms.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace snlab {

void write_element(std::ostream& os, const SequenceElement& elem) {
    os << elem.dim() << ' ' << elem.max_level() << '\n';
    for (const auto& [ix, value] : elem.coeffs()) {
        for (auto v : ix.nu) os << v << ' ';
        for (auto v : ix.m) os << v << ' ';
        os << fmt_double(value) << '\n';
    }
}

SequenceElement read_element(std::istream& is) {
    std::uint32_t d = 0, max_level = 0;
    if (!(is >> d >> max_level)) {
        throw std::runtime_error("snlab: malformed sequence element header");
    }
    SequenceElement elem(d);
    std::string line;
    std::getline(is, line);  // finish header line
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        HyperbolicIndex ix;
        ix.nu.resize(d);
        ix.m.resize(d);
        for (auto& v : ix.nu) {
            if (!(ls >> v)) throw std::runtime_error("snlab: malformed sequence element line");
        }
        for (auto& v : ix.m) {
            if (!(ls >> v)) throw std::runtime_error("snlab: malformed sequence element line");
        }
        double value = 0.0;
        if (!(ls >> value)) throw std::runtime_error("snlab: malformed sequence element line");
        if (!ix.valid() || ix.level() > max_level) {
            throw std::runtime_error("snlab: sequence element violates index invariants");
        }
        elem.set(ix, value);
    }
    return elem;
}

}  // namespace snlab
