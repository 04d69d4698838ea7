#pragma once

#include <array>
#include <bit>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "twsp/matrix.hpp"

namespace twsp::io {

enum class MatrixFormat { csv, binary };

inline MatrixFormat format_from_string(std::string_view s) {
    if (s == "csv") return MatrixFormat::csv;
    if (s == "bin" || s == "binary") return MatrixFormat::binary;
    throw std::invalid_argument("unknown matrix format: " + std::string(s));
}

// ---------------------------------------------------------------------------
// CSV: one matrix row per line, comma-separated decimal floats. Values are
// written with std::to_chars (shortest representation that parses back to the
// same bits), so write-then-read round-trips finite doubles exactly. An
// optional single header line can be skipped on read.
// ---------------------------------------------------------------------------

inline void write_csv(std::ostream& out, const DenseMatrix& a) {
    std::array<char, 64> buf;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), a(i, j));
            if (j > 0) out.put(',');
            out.write(buf.data(), res.ptr - buf.data());
        }
        out.put('\n');
    }
    if (!out) throw std::runtime_error("write_csv: stream failure");
}

inline DenseMatrix read_csv(std::istream& in, bool skip_header = false) {
    std::vector<double> data;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string line;
    bool first_content_line = true;
    while (std::getline(in, line)) {
        std::string_view view(line);
        while (!view.empty() && (view.back() == '\r' || view.back() == ' ' || view.back() == '\t'))
            view.remove_suffix(1);
        while (!view.empty() && (view.front() == ' ' || view.front() == '\t')) view.remove_prefix(1);
        if (view.empty()) continue;
        if (first_content_line && skip_header) {
            first_content_line = false;
            continue;
        }
        first_content_line = false;

        std::size_t n_fields = 0;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = view.find(',', pos);
            std::string_view field =
                view.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                 : comma - pos);
            while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
                field.remove_prefix(1);
            while (!field.empty() && (field.back() == ' ' || field.back() == '\t'))
                field.remove_suffix(1);
            double value = 0.0;
            const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
            if (res.ec != std::errc{} || res.ptr != field.data() + field.size())
                throw std::runtime_error("read_csv: bad numeric field '" + std::string(field) +
                                         "' on row " + std::to_string(rows));
            data.push_back(value);
            ++n_fields;
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (rows == 0) {
            cols = n_fields;
        } else if (n_fields != cols) {
            throw std::runtime_error("read_csv: row " + std::to_string(rows) + " has " +
                                     std::to_string(n_fields) + " fields, expected " +
                                     std::to_string(cols));
        }
        ++rows;
    }
    if (rows == 0) throw std::runtime_error("read_csv: no data rows");
    return DenseMatrix(rows, cols, std::move(data));
}

// ---------------------------------------------------------------------------
// Binary: magic bytes "TWSP", one format-version byte (1), unsigned 32-bit
// little-endian row and column counts, then rows*cols IEEE-754 doubles,
// little-endian, row-major.
// ---------------------------------------------------------------------------

namespace detail {

inline constexpr char kMagic[4] = {'T', 'W', 'S', 'P'};
inline constexpr std::uint8_t kFormatVersion = 1;

inline void put_u32_le(std::ostream& out, std::uint32_t v) {
    const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                           static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.write(bytes, 4);
}

inline std::uint32_t get_u32_le(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    if (!in) throw std::runtime_error("read_binary: truncated header");
    return static_cast<std::uint32_t>(bytes[0]) | (static_cast<std::uint32_t>(bytes[1]) << 8) |
           (static_cast<std::uint32_t>(bytes[2]) << 16) |
           (static_cast<std::uint32_t>(bytes[3]) << 24);
}

inline void put_f64_le(std::ostream& out, double d) {
    const auto bits = std::bit_cast<std::uint64_t>(d);
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(bytes, 8);
}

inline double get_f64_le(std::istream& in) {
    unsigned char bytes[8];
    in.read(reinterpret_cast<char*>(bytes), 8);
    if (!in) throw std::runtime_error("read_binary: truncated payload");
    std::uint64_t bits = 0;
    for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return std::bit_cast<double>(bits);
}

}  // namespace detail

inline void write_binary(std::ostream& out, const DenseMatrix& a) {
    if (a.rows() > 0xffffffffull || a.cols() > 0xffffffffull)
        throw std::runtime_error("write_binary: dimensions exceed the 32-bit header");
    out.write(detail::kMagic, 4);
    out.put(static_cast<char>(detail::kFormatVersion));
    detail::put_u32_le(out, static_cast<std::uint32_t>(a.rows()));
    detail::put_u32_le(out, static_cast<std::uint32_t>(a.cols()));
    for (double v : a.data()) detail::put_f64_le(out, v);
    if (!out) throw std::runtime_error("write_binary: stream failure");
}

inline DenseMatrix read_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::string_view(magic, 4) != std::string_view(detail::kMagic, 4))
        throw std::runtime_error("read_binary: not a TWSP matrix file");
    const int version = in.get();
    if (version != detail::kFormatVersion)
        throw std::runtime_error("read_binary: unsupported format version " +
                                 std::to_string(version));
    const std::uint32_t rows = detail::get_u32_le(in);
    const std::uint32_t cols = detail::get_u32_le(in);
    const std::uint64_t count = static_cast<std::uint64_t>(rows) * cols;
    std::vector<double> data;
    data.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) data.push_back(detail::get_f64_le(in));
    return DenseMatrix(rows, cols, std::move(data));
}

// Path-based wrappers.

inline DenseMatrix read_matrix(const std::filesystem::path& path, MatrixFormat format,
                               bool skip_header = false) {
    std::ifstream in(path, format == MatrixFormat::binary ? std::ios::binary : std::ios::in);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return format == MatrixFormat::csv ? read_csv(in, skip_header) : read_binary(in);
}

inline void write_matrix(const std::filesystem::path& path, const DenseMatrix& a,
                         MatrixFormat format) {
    std::ofstream out(path, format == MatrixFormat::binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    if (format == MatrixFormat::csv) {
        write_csv(out, a);
    } else {
        write_binary(out, a);
    }
}

inline DenseMatrix read_csv_file(const std::filesystem::path& path, bool skip_header = false) {
    return read_matrix(path, MatrixFormat::csv, skip_header);
}

inline void write_csv_file(const std::filesystem::path& path, const DenseMatrix& a) {
    write_matrix(path, a, MatrixFormat::csv);
}

}  // namespace twsp::io
