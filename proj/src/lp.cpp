#include "windh2/lp.hpp"

#include "windh2/text.hpp"

#include <cmath>
#include <fstream>
#include <ostream>

namespace windh2 {

namespace {

void write_terms(std::ostream& os, const Vec& coeffs) {
    bool first = true;
    for (int j = 0; j < coeffs.size(); ++j) {
        if (coeffs[j] == 0.0) continue;
        if (!first) os << " + ";
        os << format_double(coeffs[j]) << " x" << j;
        first = false;
    }
    if (first) os << "0";
}

}  // namespace

void dump_lp(const LinearProgram& lp, std::ostream& os) {
    os << "# LinearProgram: " << lp.num_vars() << " variables, " << lp.constraints.size()
       << " constraints\n";
    os << "max: ";
    write_terms(os, lp.objective);
    os << "\n";
    for (std::size_t i = 0; i < lp.constraints.size(); ++i) {
        const auto& c = lp.constraints[i];
        os << "c" << i << ": ";
        write_terms(os, c.coeffs);
        os << (c.rel == Relation::LessEq ? " <= " : c.rel == Relation::Equal ? " = " : " >= ")
           << format_double(c.rhs) << "\n";
    }
    for (int j = 0; j < lp.num_vars(); ++j) {
        const double lo = lp.lower[j], hi = lp.upper[j];
        os << "bounds: ";
        if (!std::isfinite(lo) && !std::isfinite(hi)) {
            os << "x" << j << " free\n";
            continue;
        }
        if (std::isfinite(lo)) os << format_double(lo) << " <= ";
        os << "x" << j;
        if (std::isfinite(hi)) os << " <= " << format_double(hi);
        os << "\n";
    }
    for (int j : lp.integrality) os << "binary: x" << j << "\n";
}

void dump_lp(const LinearProgram& lp, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw FileError("cannot open '" + path + "' for writing");
    dump_lp(lp, os);
}

}  // namespace windh2
