#pragma once

// Text-embedding providers. The stub is seeded and fully deterministic so
// every downstream pipeline runs without a network; the cache wraps any
// provider with a content-addressed file store (one little-endian f32 file
// per key, length-prefixed).

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgqa/errors.hpp"
#include "kgqa/hash.hpp"
#include "kgqa/rng.hpp"

namespace kgqa {

class TextEmbedder {
 public:
  virtual ~TextEmbedder() = default;
  virtual std::string id() const = 0;  // namespaces cache keys
  virtual int dim() const = 0;
  virtual std::vector<float> embed(const std::string& text) = 0;
};

// Seeded pseudo-random projection of the whitespace token multiset, then
// unit-normalized. Same text gives the same vector; texts sharing tokens get
// correlated vectors, which is enough lexical signal for tests and desk-scale
// training.
class StubTextEmbedder : public TextEmbedder {
 public:
  explicit StubTextEmbedder(int dim = 1536, std::uint64_t seed = 1) : dim_(dim), seed_(seed) {
    if (dim <= 0) throw ConfigError("stub embedder dim must be positive");
  }

  std::string id() const override { return "stub-" + std::to_string(dim_) + "-" + std::to_string(seed_); }
  int dim() const override { return dim_; }

  std::vector<float> embed(const std::string& text) override {
    std::vector<double> acc(static_cast<std::size_t>(dim_), 0.0);
    std::size_t i = 0;
    bool any_token = false;
    while (i < text.size()) {
      while (i < text.size() && is_space(text[i])) ++i;
      std::size_t start = i;
      while (i < text.size() && !is_space(text[i])) ++i;
      if (i > start) {
        any_token = true;
        add_token(acc, std::string_view(text).substr(start, i - start));
      }
    }
    if (!any_token) add_token(acc, "");
    double norm = 0;
    for (double v : acc) norm += v * v;
    norm = std::sqrt(norm);
    std::vector<float> out(acc.size());
    if (norm < 1e-12) {
      out[0] = 1.0f;
    } else {
      for (std::size_t d = 0; d < acc.size(); ++d) out[d] = static_cast<float>(acc[d] / norm);
    }
    return out;
  }

 private:
  static bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

  void add_token(std::vector<double>& acc, std::string_view token) const {
    SplitMix64 rng(fnv1a64(token) ^ (seed_ * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL));
    for (double& v : acc) v += rng.uniform(-1.0, 1.0);
  }

  int dim_;
  std::uint64_t seed_;
};

// Content-addressed cache: memory map in front of one binary file per key
// under cache_dir. Concurrent readers are fine; writers go through a
// temp-file rename so a torn write is never observed.
class CachingTextEmbedder : public TextEmbedder {
 public:
  CachingTextEmbedder(std::shared_ptr<TextEmbedder> inner, std::filesystem::path cache_dir)
      : inner_(std::move(inner)), dir_(std::move(cache_dir)) {
    std::filesystem::create_directories(dir_);
  }

  std::string id() const override { return inner_->id(); }
  int dim() const override { return inner_->dim(); }

  std::vector<float> embed(const std::string& text) override {
    std::string key = to_hex(fnv1a64(inner_->id() + '\x1f' + text));
    {
      std::lock_guard lock(mu_);
      auto it = memory_.find(key);
      if (it != memory_.end()) return it->second;
    }
    auto path = dir_ / (key + ".vec");
    if (auto cached = read_vec(path); cached && static_cast<int>(cached->size()) == dim()) {
      std::lock_guard lock(mu_);
      return memory_.emplace(key, std::move(*cached)).first->second;
    }
    std::vector<float> fresh = inner_->embed(text);
    if (static_cast<int>(fresh.size()) != dim())
      throw ValidationError("provider returned wrong embedding dimension");
    write_vec(path, fresh);
    std::lock_guard lock(mu_);
    return memory_.emplace(key, std::move(fresh)).first->second;
  }

 private:
  static std::optional<std::vector<float>> read_vec(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::uint32_t count = 0;
    in.read(reinterpret_cast<char*>(&count), 4);
    std::vector<float> data(count);
    in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(count) * 4);
    if (!in) return std::nullopt;
    return data;
  }

  void write_vec(const std::filesystem::path& path, const std::vector<float>& data) const {
    auto tmp = path;
    tmp += ".tmp" + std::to_string(fnv1a64(path.string()) & 0xffff);
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write cache file: " + tmp.string());
      std::uint32_t count = static_cast<std::uint32_t>(data.size());
      out.write(reinterpret_cast<const char*>(&count), 4);
      out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()) * 4);
    }
    std::filesystem::rename(tmp, path);
  }

  std::shared_ptr<TextEmbedder> inner_;
  std::filesystem::path dir_;
  std::mutex mu_;
  std::unordered_map<std::string, std::vector<float>> memory_;
};

// Relation surface form as fed to the text embedder: underscores become
// spaces ("written_by_reverse" -> "written by reverse").
inline std::string relation_text_form(std::string name) {
  for (char& c : name)
    if (c == '_') c = ' ';
  return name;
}

}  // namespace kgqa
