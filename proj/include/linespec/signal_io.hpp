#pragma once

#include "linespec/core.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>

namespace linespec::io {

// CSV: header "re,im", one sample per row, 17 significant digits.
void write_signal_csv(std::ostream& out, const ComplexSignal& signal);
ComplexSignal read_signal_csv(std::istream& in);

// JSON: {"n": int, "samples": [[re, im], ...]}
nlohmann::json signal_to_json(const ComplexSignal& signal);
ComplexSignal signal_from_json(const nlohmann::json& j);

nlohmann::json vector_to_json(const CVector& v);
CVector vector_from_json(const nlohmann::json& j);

ComplexSignal load_signal(const std::filesystem::path& path);  // dispatch on extension
void save_signal(const std::filesystem::path& path, const ComplexSignal& signal);

/// Shortest-round-trip-safe decimal for a double (17 significant digits).
std::string format_double(double value);

}  // namespace linespec::io
