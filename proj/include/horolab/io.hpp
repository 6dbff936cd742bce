#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace horolab::io {

inline constexpr const char* kVersion = "horolab 0.1.0";

/// Shortest round-trip decimal form; locale independent, so equal inputs
/// always print the same bytes.
std::string format_double(double x);

using Cell = std::variant<long long, double, std::string>;

/// Minimal CSV emitter: header row then data rows, '.' decimal point,
/// quoting only where a field contains a comma, quote, or newline.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void header(const std::vector<std::string>& names);
    void row(const std::vector<Cell>& cells);

  private:
    std::ostream& os_;
};

/// Echo of one CLI run: every output row is traceable to this record.
struct RunManifest {
    std::string subcommand;
    nlohmann::ordered_json params;
    std::uint64_t seed = 0;
    std::string version = kVersion;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;

    nlohmann::ordered_json to_json() const;
};

}  // namespace horolab::io
