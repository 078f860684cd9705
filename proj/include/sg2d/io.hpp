#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sg2d/fourier_field.hpp"

namespace sg2d {

/// "%.17g", round-trips every finite double.
std::string format_double(double x);

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);
  CsvWriter& operator<<(const std::vector<std::string>& cells) {
    row(cells);
    return *this;
  }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

void write_json(const std::filesystem::path& path, const nlohmann::json& value);
nlohmann::json read_json(const std::filesystem::path& path);

/// SHA-1 of "blob <size>\0" + content, as git hash-object computes it.
std::string git_blob_hash(const std::string& content);

/// One JSON header line, then little-endian IEEE-754 doubles.
void write_snapshot(const std::filesystem::path& path, nlohmann::json header,
                    std::span<const double> data);

struct Snapshot {
  nlohmann::json header;
  std::vector<double> data;
};
Snapshot read_snapshot(const std::filesystem::path& path);

/// Grid point values of each field, one after the other.
void save_ensemble(const std::filesystem::path& path, const std::vector<FourierField>& fields,
                   nlohmann::json metadata);
std::vector<FourierField> load_ensemble(const std::filesystem::path& path, const GridSpec& grid);

}  // namespace sg2d
