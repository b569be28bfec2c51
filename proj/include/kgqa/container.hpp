#pragma once

// Named-array container: a JSON header (arbitrary config object plus an
// array manifest with dtypes, shapes and byte offsets) followed by raw
// little-endian payloads. Shared by scorer checkpoints, embedding tables and
// example stores. Reload is bit-exact.
//
// Layout: 8-byte magic | u64 LE header length | header JSON | payload bytes.

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "kgqa/errors.hpp"

namespace kgqa {

static_assert(std::endian::native == std::endian::little, "container format assumes little-endian");

inline constexpr char kContainerMagic[8] = {'K', 'G', 'Q', 'A', 'C', 'N', 'T', '1'};

struct NamedArray {
  std::string name;
  std::string dtype;  // "f32" or "i32"
  std::vector<std::size_t> shape;
  std::vector<float> f32;
  std::vector<std::int32_t> i32;

  std::size_t count() const {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
  }
};

inline NamedArray make_f32_array(std::string name, std::vector<std::size_t> shape, std::vector<float> data) {
  NamedArray a;
  a.name = std::move(name);
  a.dtype = "f32";
  a.shape = std::move(shape);
  a.f32 = std::move(data);
  if (a.count() != a.f32.size()) throw ValidationError("array '" + a.name + "': shape does not match data size");
  return a;
}

inline NamedArray make_i32_array(std::string name, std::vector<std::size_t> shape,
                                 std::vector<std::int32_t> data) {
  NamedArray a;
  a.name = std::move(name);
  a.dtype = "i32";
  a.shape = std::move(shape);
  a.i32 = std::move(data);
  if (a.count() != a.i32.size()) throw ValidationError("array '" + a.name + "': shape does not match data size");
  return a;
}

struct Container {
  nlohmann::json config;
  std::vector<NamedArray> arrays;

  const NamedArray& at(const std::string& name) const {
    for (const auto& a : arrays)
      if (a.name == name) return a;
    throw ValidationError("container has no array named '" + name + "'");
  }
  bool has(const std::string& name) const {
    for (const auto& a : arrays)
      if (a.name == name) return true;
    return false;
  }
};

inline void write_container(const std::string& path, const Container& c) {
  nlohmann::json manifest = nlohmann::json::array();
  std::size_t offset = 0;
  for (const auto& a : c.arrays) {
    if (a.dtype != "f32" && a.dtype != "i32") throw ValidationError("unsupported dtype: " + a.dtype);
    std::size_t bytes = a.count() * 4;
    manifest.push_back({{"name", a.name}, {"dtype", a.dtype}, {"shape", a.shape},
                        {"offset", offset}, {"count", a.count()}});
    offset += bytes;
  }
  nlohmann::json header{{"format_version", 1}, {"config", c.config}, {"arrays", std::move(manifest)}};
  std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(kContainerMagic, 8);
  std::uint64_t header_len = header_text.size();
  out.write(reinterpret_cast<const char*>(&header_len), 8);
  out.write(header_text.data(), static_cast<std::streamsize>(header_text.size()));
  for (const auto& a : c.arrays) {
    const char* data = a.dtype == "f32" ? reinterpret_cast<const char*>(a.f32.data())
                                        : reinterpret_cast<const char*>(a.i32.data());
    out.write(data, static_cast<std::streamsize>(a.count() * 4));
  }
  if (!out) throw IoError("short write: " + path);
}

inline Container read_container(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open container: " + path);
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kContainerMagic, 8) != 0)
    throw ParseError("not a container file (bad magic): " + path);
  std::uint64_t header_len = 0;
  in.read(reinterpret_cast<char*>(&header_len), 8);
  std::string header_text(header_len, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(header_len));
  if (!in) throw ParseError("truncated container header: " + path);

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("container header is not valid JSON: ") + e.what());
  }

  const std::uint64_t payload_start = 16 + header_len;
  Container c;
  c.config = header.value("config", nlohmann::json::object());
  for (const auto& entry : header.at("arrays")) {
    NamedArray a;
    a.name = entry.at("name").get<std::string>();
    a.dtype = entry.at("dtype").get<std::string>();
    a.shape = entry.at("shape").get<std::vector<std::size_t>>();
    std::size_t count = entry.at("count").get<std::size_t>();
    if (count != a.count()) throw ParseError("array '" + a.name + "': count disagrees with shape");
    in.seekg(static_cast<std::streamoff>(payload_start + entry.at("offset").get<std::uint64_t>()));
    if (a.dtype == "f32") {
      a.f32.resize(count);
      in.read(reinterpret_cast<char*>(a.f32.data()), static_cast<std::streamsize>(count * 4));
    } else if (a.dtype == "i32") {
      a.i32.resize(count);
      in.read(reinterpret_cast<char*>(a.i32.data()), static_cast<std::streamsize>(count * 4));
    } else {
      throw ParseError("array '" + a.name + "': unsupported dtype " + a.dtype);
    }
    if (!in) throw ParseError("truncated container payload at array '" + a.name + "'");
    c.arrays.push_back(std::move(a));
  }
  return c;
}

}  // namespace kgqa
