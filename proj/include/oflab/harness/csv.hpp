#pragma once

#include <string>
#include <variant>
#include <vector>

namespace oflab::harness {

/// Small CSV builder: '.' decimals, '\n' line endings, numbers in shortest
/// round-trip form.
class CsvTable {
public:
    using Cell = std::variant<double, long long, std::string>;

    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<Cell> row);
    std::size_t size() const { return rows_.size(); }
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

}  // namespace oflab::harness
