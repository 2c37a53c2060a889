#include "protmeas/cli/table.hpp"

#include <fstream>
#include <system_error>

#include <fmt/format.h>

#include "protmeas/errors.hpp"

namespace protmeas::cli {

void ResultTable::add_column(std::string name, std::string unit, std::vector<double> values) {
    if (name.empty()) {
        throw ContractError("ResultTable: column name must not be empty");
    }
    if (has_column(name)) {
        throw ContractError("ResultTable: duplicate column '" + name + "'");
    }
    if (!names_.empty() && values.size() != rows_) {
        throw ContractError("ResultTable: column '" + name + "' has " +
                            std::to_string(values.size()) + " rows, table has " +
                            std::to_string(rows_));
    }
    rows_ = values.size();
    names_.push_back(std::move(name));
    units_.push_back(std::move(unit));
    data_.push_back(std::move(values));
}

void ResultTable::add_complex_column(const std::string& name, const std::string& unit,
                                     const std::vector<Complex>& values) {
    std::vector<double> re(values.size());
    std::vector<double> im(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        re[i] = values[i].real();
        im[i] = values[i].imag();
    }
    add_column(name + "_re", unit, std::move(re));
    add_column(name + "_im", unit, std::move(im));
}

std::size_t ResultTable::index_of(const std::string& name) const {
    for (std::size_t i = 0; i < names_.size(); ++i) {
        if (names_[i] == name) {
            return i;
        }
    }
    throw ContractError("ResultTable: no column named '" + name + "'");
}

bool ResultTable::has_column(const std::string& name) const {
    for (const auto& n : names_) {
        if (n == name) {
            return true;
        }
    }
    return false;
}

const std::string& ResultTable::unit(const std::string& name) const {
    return units_[index_of(name)];
}

const std::vector<double>& ResultTable::column(const std::string& name) const {
    return data_[index_of(name)];
}

std::string ResultTable::to_csv() const {
    std::string out;
    for (std::size_t c = 0; c < names_.size(); ++c) {
        if (c > 0) {
            out += ',';
        }
        out += names_[c] + " [" + units_[c] + "]";
    }
    out += '\n';
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < data_.size(); ++c) {
            if (c > 0) {
                out += ',';
            }
            out += fmt::format("{:.17g}", data_[c][r]);
        }
        out += '\n';
    }
    return out;
}

void ResultTable::write_csv(const std::filesystem::path& path) const {
    write_file_atomic(path, to_csv());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw IoError("cannot open '" + tmp.string() + "' for writing");
        }
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
        f.flush();
        if (!f) {
            throw IoError("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() + "'");
    }
}

} // namespace protmeas::cli
