#pragma once

#include <string>
#include <vector>

#include "freeconv/measures.hpp"

namespace freeconv {

// Rows of already-formatted cells; the writer renders reals with 17
// significant digits, LF line endings, and writes atomically
// (temp file + rename). I/O failures carry the path in the message.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

void write_csv(const CsvTable& table, const std::string& path);

// TransformTable rendering: density tables yield `x,density`; complex-valued
// tables yield paired re/im columns per the transform kind.
void emit_csv(const TransformTable& table, const std::string& path);

std::string format_double(double v);  // %.17g

}  // namespace freeconv
