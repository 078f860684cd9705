#include "sg2d/io.hpp"

#include <openssl/sha.h>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <stdexcept>

namespace sg2d {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path.string() + " for writing");
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) throw std::logic_error("csv row has the wrong number of columns");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void write_json(const std::filesystem::path& path, const nlohmann::json& value) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << value.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return nlohmann::json::parse(in);
}

std::string git_blob_hash(const std::string& content) {
  const std::string blob = "blob " + std::to_string(content.size()) + '\0' + content;
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(blob.data()), blob.size(), digest);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned char b : digest) {
    out.push_back(hex[b >> 4]);
    out.push_back(hex[b & 15]);
  }
  return out;
}

namespace {

std::uint64_t to_little(std::uint64_t x) {
  if constexpr (std::endian::native == std::endian::big) return __builtin_bswap64(x);
  return x;
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, nlohmann::json header,
                    std::span<const double> data) {
  header["count"] = data.size();
  header["dtype"] = "float64-le";
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << header.dump() << '\n';
  for (double x : data) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(x));
    out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
  }
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);
  Snapshot snap;
  snap.header = nlohmann::json::parse(line);
  const auto count = snap.header.at("count").get<std::size_t>();
  snap.data.resize(count);
  for (auto& x : snap.data) {
    std::uint64_t bits = 0;
    if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
      throw std::runtime_error("snapshot " + path.string() + " is truncated");
    }
    x = std::bit_cast<double>(to_little(bits));
  }
  return snap;
}

void save_ensemble(const std::filesystem::path& path, const std::vector<FourierField>& fields,
                   nlohmann::json metadata) {
  std::vector<double> data;
  if (!fields.empty()) {
    const GridSpec& g = fields.front().grid();
    metadata["M"] = g.points_per_axis;
    metadata["N"] = g.cutoff;
    metadata["beta_sq"] = g.beta_sq;
    metadata["coupling"] = g.coupling;
  }
  metadata["fields"] = fields.size();
  for (const auto& f : fields) {
    const auto values = inverse_transform(f);
    data.insert(data.end(), values.begin(), values.end());
  }
  write_snapshot(path, std::move(metadata), data);
}

std::vector<FourierField> load_ensemble(const std::filesystem::path& path, const GridSpec& grid) {
  const Snapshot snap = read_snapshot(path);
  const std::size_t per = grid.size();
  if (snap.data.size() % per != 0) throw std::runtime_error("ensemble size does not match grid");
  std::vector<FourierField> out;
  for (std::size_t k = 0; k < snap.data.size() / per; ++k) {
    out.push_back(forward_transform(std::span<const double>(snap.data).subspan(k * per, per), grid));
  }
  return out;
}

}  // namespace sg2d
