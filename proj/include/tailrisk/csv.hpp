#ifndef TAILRISK_CSV_HPP
#define TAILRISK_CSV_HPP

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace tailrisk {

/// 12 significant digits, the machine-readable precision.
inline std::string csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// 4 decimals, the human-readable precision.
inline std::string human_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

/// A rectangular numeric table with named columns.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

inline void write_csv(std::ostream& out, const CsvTable& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_number(r[i]);
        out << '\n';
    }
}

} // namespace tailrisk

#endif // TAILRISK_CSV_HPP
