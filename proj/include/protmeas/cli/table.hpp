#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "protmeas/oscillator.hpp"

namespace protmeas::cli {

/// Rectangular table of real columns with a "name [unit]" header. Complex
/// data is stored as paired name_re / name_im columns.
class ResultTable {
public:
    void add_column(std::string name, std::string unit, std::vector<double> values);
    void add_complex_column(const std::string& name, const std::string& unit,
                            const std::vector<Complex>& values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t columns() const noexcept { return names_.size(); }
    const std::vector<std::string>& names() const noexcept { return names_; }
    const std::string& unit(const std::string& name) const;
    bool has_column(const std::string& name) const;
    /// Throws ContractError naming the column when it is absent.
    const std::vector<double>& column(const std::string& name) const;

    std::string to_csv() const;
    /// Writes through a temporary file in the same directory and renames it
    /// into place; throws IoError on failure.
    void write_csv(const std::filesystem::path& path) const;

private:
    std::size_t index_of(const std::string& name) const;

    std::vector<std::string> names_;
    std::vector<std::string> units_;
    std::vector<std::vector<double>> data_;
    std::size_t rows_ = 0;
};

/// Atomic text write (temporary file + rename).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace protmeas::cli
