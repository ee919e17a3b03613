#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "landau/common.hpp"

namespace landau {

using json = nlohmann::json;

inline constexpr const char* version_string = "0.1.0";

// Binary container: one line of JSON header, then the raw little-endian
// float64 payload (complex values stored as interleaved re, im).
struct ArrayFile {
    json header;
    std::vector<double> data;

    bool is_complex() const { return header.value("dtype", std::string("float64")) == "complex128"; }
    std::vector<cplx> complex_values() const;
};

void write_array_file(const std::string& path, json header, const std::vector<double>& data);
void write_array_file(const std::string& path, json header, const std::vector<cplx>& data);
ArrayFile read_array_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace landau
