#ifndef METASTABLE_IO_HPP
#define METASTABLE_IO_HPP

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "metastable/errors.hpp"

namespace metastable {

/// 17 significant digits: round-trips any double, keeps output byte-identical.
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const void* data, std::size_t size,
                             std::uint64_t seed = 14695981039346656037ull) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s,
                             std::uint64_t seed = 14695981039346656037ull) {
    return fnv1a64(s.data(), s.size(), seed);
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Hash a vector of doubles through their 17-digit decimal forms so the
/// digest is stable across platforms that agree on printed values.
inline std::string digest_doubles(const std::vector<double>& v) {
    std::uint64_t h = 14695981039346656037ull;
    for (double x : v) {
        auto s = format_g17(x);
        h = fnv1a64(s.data(), s.size(), h);
        h = fnv1a64(",", 1, h);
    }
    return hex64(h);
}

/// Comma-separated, header row, LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row) {
        if (row.size() != header_.size())
            throw PreconditionViolation("csv row width mismatch");
        rows_.push_back(std::move(row));
    }

    std::string str() const {
        std::string out;
        auto append = [&out](const std::vector<std::string>& cells) {
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) out += ',';
                out += cells[i];
            }
            out += '\n';
        };
        append(header_);
        for (const auto& r : rows_) append(r);
        return out;
    }

    void write(const std::filesystem::path& path) const {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw Error("cannot open " + path.string() + " for writing");
        f << str();
    }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string() + " for writing");
    f << text;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open " + path.string());
    std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return s;
}

} // namespace metastable

#endif
