#include "landau/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace landau {

static_assert(std::endian::native == std::endian::little, "container format assumes a little-endian host");

std::vector<cplx> ArrayFile::complex_values() const {
    if (!is_complex()) {
        std::vector<cplx> out(data.begin(), data.end());
        return out;
    }
    std::vector<cplx> out(data.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {data[2 * i], data[2 * i + 1]};
    return out;
}

namespace {

void write_payload(const std::string& path, json header, const double* p, std::size_t n) {
    header["byte_order"] = "little";
    header["count"] = n;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    const std::string head = header.dump();
    out.write(head.data(), std::streamsize(head.size()));
    out.put('\n');
    out.write(reinterpret_cast<const char*>(p), std::streamsize(n * sizeof(double)));
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace

void write_array_file(const std::string& path, json header, const std::vector<double>& data) {
    header["dtype"] = "float64";
    write_payload(path, std::move(header), data.data(), data.size());
}

void write_array_file(const std::string& path, json header, const std::vector<cplx>& data) {
    header["dtype"] = "complex128";
    write_payload(path, std::move(header), reinterpret_cast<const double*>(data.data()), 2 * data.size());
}

ArrayFile read_array_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::string head;
    if (!std::getline(in, head)) throw IoError("missing header in " + path);
    ArrayFile f;
    try {
        f.header = json::parse(head);
    } catch (const json::exception& e) {
        throw IoError("bad header in " + path + ": " + e.what());
    }
    const std::size_t n = f.header.value("count", std::size_t(0));
    f.data.resize(n);
    in.read(reinterpret_cast<char*>(f.data.data()), std::streamsize(n * sizeof(double)));
    if (std::size_t(in.gcount()) != n * sizeof(double)) throw IoError("truncated payload in " + path);
    return f;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << text;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace landau
