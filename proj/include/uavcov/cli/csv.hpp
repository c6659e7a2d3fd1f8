#pragma once

#include <array>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace uavcov::cli {

/// Result columns after the sweep column, in file order.
inline constexpr std::array<std::string_view, 10> kResultColumns = {
    "beta_db",  "pc_exact", "pc_clt",       "pc_lower",     "pc_upper",
    "pc_mc",    "mc_ci",    "pc_block_mix", "pc_block_sim", "block_ci"};

using Cell = std::optional<double>;

struct ResultRow
{
    double sweep_value = 0.0;
    double beta_db = 0.0;
    Cell pc_exact, pc_clt, pc_lower, pc_upper, pc_mc, mc_ci, pc_block_mix, pc_block_sim, block_ci;

    std::array<Cell, 9> cells() const;
    void set_cells(const std::array<Cell, 9>& c);
};

struct ResultTable
{
    std::string sweep_variable;  // column name is "sweep_" + sweep_variable
    std::vector<ResultRow> rows;
};

class CsvError : public std::runtime_error
{
public:
    CsvError(const std::string& source, int line, const std::string& message);
};

std::string csv_header(const std::string& sweep_variable);
void write_csv(std::ostream& out, const ResultTable& table);
ResultTable read_csv(std::istream& in, const std::string& source_name);

/// Shortest text that reads back to the same double; "inf" for infinity.
std::string format_number(double v);

}  // namespace uavcov::cli
