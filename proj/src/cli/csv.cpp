#include "uavcov/cli/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "uavcov/cli/config.hpp"

namespace uavcov::cli {

std::array<Cell, 9> ResultRow::cells() const
{
    return {pc_exact, pc_clt, pc_lower, pc_upper, pc_mc, mc_ci, pc_block_mix, pc_block_sim,
            block_ci};
}

void ResultRow::set_cells(const std::array<Cell, 9>& c)
{
    pc_exact = c[0];
    pc_clt = c[1];
    pc_lower = c[2];
    pc_upper = c[3];
    pc_mc = c[4];
    mc_ci = c[5];
    pc_block_mix = c[6];
    pc_block_sim = c[7];
    block_ci = c[8];
}

CsvError::CsvError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + message)
{
}

std::string format_number(double v)
{
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_header(const std::string& sweep_variable)
{
    std::string h = "sweep_" + sweep_variable;
    for (auto c : kResultColumns) {
        h += ',';
        h += c;
    }
    return h;
}

void write_csv(std::ostream& out, const ResultTable& table)
{
    out << csv_header(table.sweep_variable) << '\n';
    for (const auto& row : table.rows) {
        out << format_number(row.sweep_value) << ',' << format_number(row.beta_db);
        for (const auto& cell : row.cells()) {
            out << ',';
            if (cell) out << format_number(*cell);
        }
        out << '\n';
    }
}

ResultTable read_csv(std::istream& in, const std::string& source_name)
{
    std::string line;
    int line_no = 1;
    if (!std::getline(in, line)) throw CsvError(source_name, 1, "empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ResultTable table;
    const auto comma = line.find(',');
    const std::string first = line.substr(0, comma);
    if (first.rfind("sweep_", 0) != 0 || comma == std::string::npos) {
        throw CsvError(source_name, 1, "header must start with a sweep_<variable> column");
    }
    table.sweep_variable = first.substr(6);
    if (line != csv_header(table.sweep_variable)) {
        throw CsvError(source_name, 1, "unexpected header; expected '" +
                                           csv_header(table.sweep_variable) + "'");
    }
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        for (;;) {
            const auto pos = line.find(',', start);
            fields.push_back(line.substr(start, pos - start));
            if (pos == std::string::npos) break;
            start = pos + 1;
        }
        if (fields.size() != kResultColumns.size() + 1) {
            std::ostringstream msg;
            msg << "expected " << kResultColumns.size() + 1 << " fields, found " << fields.size();
            throw CsvError(source_name, line_no, msg.str());
        }
        auto parse = [&](const std::string& text, const char* what) {
            try {
                return parse_number(text);
            } catch (const std::invalid_argument&) {
                throw CsvError(source_name, line_no,
                               std::string("bad number in ") + what + ": '" + text + "'");
            }
        };
        ResultRow row;
        if (fields[0].empty() || fields[1].empty()) {
            throw CsvError(source_name, line_no, "sweep value and beta_db are mandatory");
        }
        row.sweep_value = parse(fields[0], "sweep column");
        row.beta_db = parse(fields[1], "beta_db");
        std::array<Cell, 9> cells;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (!fields[i + 2].empty()) {
                cells[i] = parse(fields[i + 2], std::string(kResultColumns[i + 1]).c_str());
            }
        }
        row.set_cells(cells);
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace uavcov::cli
