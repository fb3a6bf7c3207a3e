#include "freeconv/csvio.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace freeconv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void write_atomically(const std::string& path, const std::string& body) {
    std::filesystem::path target(path);
    std::filesystem::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::runtime_error("cannot open for writing: " + tmp.string());
        os << body;
        if (!os) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw std::runtime_error("rename failed for " + path + ": " + ec.message());
}

}  // namespace

void write_csv(const CsvTable& table, const std::string& path) {
    if (table.header.empty()) throw std::invalid_argument("csv table needs a header row");
    std::string body;
    for (size_t i = 0; i < table.header.size(); ++i) {
        if (i) body += ',';
        body += table.header[i];
    }
    body += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw std::invalid_argument("csv row width does not match the header");
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) body += ',';
            body += format_double(row[i]);
        }
        body += '\n';
    }
    write_atomically(path, body);
}

void emit_csv(const TransformTable& table, const std::string& path) {
    table.require_valid();
    CsvTable out;
    switch (table.kind) {
        case TransformKind::Density:
            out.header = {"x", "density"};
            for (auto& [in, val] : table.points) out.rows.push_back({in.real(), val.real()});
            break;
        case TransformKind::T:
        case TransformKind::S:
            out.header = {"u", "re", "im"};
            for (auto& [in, val] : table.points) out.rows.push_back({in.real(), val.real(), val.imag()});
            break;
        default:
            out.header = {"z_re", "z_im", "re", "im"};
            for (auto& [in, val] : table.points)
                out.rows.push_back({in.real(), in.imag(), val.real(), val.imag()});
            break;
    }
    write_csv(out, path);
}

}  // namespace freeconv
