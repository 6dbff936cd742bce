#include "horolab/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace horolab::io {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    // try increasing precision until the value round-trips
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

namespace {

// quote only when needed (comma, quote, newline), doubling inner quotes
void put_field(std::ostream& os, const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        os << s;
        return;
    }
    os << '"';
    for (char c : s) {
        if (c == '"') os << '"';
        os << c;
    }
    os << '"';
}

}  // namespace

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) os_ << ',';
        put_field(os_, names[i]);
    }
    os_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) os_ << ',';
        if (std::holds_alternative<long long>(cells[i])) {
            os_ << std::get<long long>(cells[i]);
        } else if (std::holds_alternative<double>(cells[i])) {
            os_ << format_double(std::get<double>(cells[i]));
        } else {
            put_field(os_, std::get<std::string>(cells[i]));
        }
    }
    os_ << '\n';
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["subcommand"] = subcommand;
    j["params"] = params;
    j["seed"] = seed;
    j["version"] = version;
    j["wall_seconds"] = wall_seconds;
    j["outputs"] = outputs;
    return j;
}

}  // namespace horolab::io
