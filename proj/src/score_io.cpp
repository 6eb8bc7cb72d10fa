// Copyright 2026 The llrkit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "llrkit/score_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "llrkit/errors.hpp"

namespace llrkit {
namespace {

class Writer {
 public:
  explicit Writer(std::size_t reserve) { bytes_.reserve(reserve); }

  void raw(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    bytes_.insert(bytes_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { bytes_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * k)));
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void names(const NameList& list) {
    for (const auto& n : list) {
      if (n.size() > std::numeric_limits<std::uint32_t>::max()) throw FormatError("name too long");
      u32(static_cast<std::uint32_t>(n.size()));
      raw(n.data(), n.size());
    }
  }

  Bytes take() { return std::move(bytes_); }

 private:
  Bytes bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::span<const std::uint8_t> take(std::size_t n, const char* what) {
    if (n > bytes_.size() - pos_) throw FormatError(std::string("truncated input while reading ") + what);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  std::uint8_t u8(const char* what) { return take(1, what)[0]; }
  std::uint32_t u32(const char* what) {
    auto s = take(4, what);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k) v |= static_cast<std::uint32_t>(s[static_cast<std::size_t>(k)]) << (8 * k);
    return v;
  }
  std::uint64_t u64(const char* what) {
    auto s = take(8, what);
    std::uint64_t v = 0;
    for (int k = 0; k < 8; ++k) v |= static_cast<std::uint64_t>(s[static_cast<std::size_t>(k)]) << (8 * k);
    return v;
  }
  NameList names(std::uint64_t count, const char* what) {
    // Every name needs at least its 4-byte length prefix.
    if (count > remaining() / 4) throw FormatError(std::string("truncated input while reading ") + what);
    NameList out;
    out.reserve(static_cast<std::size_t>(count));
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::uint32_t len = u32(what);
      auto s = take(len, what);
      out.emplace_back(reinterpret_cast<const char*>(s.data()), s.size());
    }
    return out;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

struct Header {
  BinaryKind kind;
  NameList models;
  NameList segments;
  std::span<const std::uint8_t> cells;
};

void write_header(Writer& w, BinaryKind kind, const NameList& models, const NameList& segments) {
  w.raw(kBinaryMagic, 4);
  w.u32(kBinaryVersion);
  w.u8(static_cast<std::uint8_t>(kind));
  w.u64(models.size());
  w.u64(segments.size());
  w.names(models);
  w.names(segments);
}

std::size_t names_size(const NameList& names) {
  std::size_t n = 0;
  for (const auto& s : names) n += 4 + s.size();
  return n;
}

Header read_header(Reader& r, BinaryKind expected) {
  auto magic = r.take(4, "magic");
  if (std::memcmp(magic.data(), kBinaryMagic, 4) != 0) throw FormatError("bad magic, not a BXSC file");
  const std::uint32_t version = r.u32("version");
  if (version != kBinaryVersion) throw FormatError("unsupported version " + std::to_string(version));
  const std::uint8_t kind = r.u8("kind");
  if (kind > 1) throw FormatError("unknown kind " + std::to_string(kind));
  if (static_cast<BinaryKind>(kind) != expected) {
    throw FormatError(expected == BinaryKind::Scores ? "file holds a key, expected scores"
                                                     : "file holds scores, expected a key");
  }
  const std::uint64_t m = r.u64("model count");
  const std::uint64_t s = r.u64("segment count");
  Header h{expected, r.names(m, "model names"), r.names(s, "segment names"), {}};
  if (s != 0 && m > r.remaining() / s) throw FormatError("truncated input while reading cells");
  h.cells = r.take(static_cast<std::size_t>(m * s), "cells");
  return h;
}

template <typename Make>
auto build_checked(Make&& make) {
  try {
    return make();
  } catch (const InvariantError& e) {
    throw FormatError(e.what());
  }
}

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

// Splits "a<TAB>b<TAB>c" into exactly three non-empty fields.
bool split3(std::string_view line, std::string_view (&f)[3]) {
  const auto t1 = line.find('\t');
  if (t1 == std::string_view::npos) return false;
  const auto t2 = line.find('\t', t1 + 1);
  if (t2 == std::string_view::npos) return false;
  if (line.find('\t', t2 + 1) != std::string_view::npos) return false;
  f[0] = line.substr(0, t1);
  f[1] = line.substr(t1 + 1, t2 - t1 - 1);
  f[2] = line.substr(t2 + 1);
  return !f[0].empty() && !f[1].empty() && !f[2].empty();
}

// Accumulates (model, segment, value) triples with first-appearance name order.
template <typename Value>
class TripleCollector {
 public:
  struct Triple {
    std::size_t model;
    std::size_t segment;
    Value value;
  };

  void add(std::string_view model, std::string_view segment, Value v, std::size_t line) {
    const std::size_t m = intern(model, models_, model_pos_);
    const std::size_t s = intern(segment, segments_, segment_pos_);
    const auto key = (static_cast<std::uint64_t>(m) << 32) | s;
    if (!seen_.emplace(key, line).second) {
      throw DuplicateTrial("trial (" + std::string(model) + ", " + std::string(segment) +
                               ") already given on line " + std::to_string(seen_.at(key)),
                           line);
    }
    triples_.push_back({m, s, v});
  }

  NameList models_;
  NameList segments_;
  std::vector<Triple> triples_;

 private:
  static std::size_t intern(std::string_view name, NameList& list,
                            std::unordered_map<std::string, std::size_t>& pos) {
    auto [it, inserted] = pos.try_emplace(std::string(name), list.size());
    if (inserted) list.emplace_back(name);
    return it->second;
  }

  std::unordered_map<std::string, std::size_t> model_pos_;
  std::unordered_map<std::string, std::size_t> segment_pos_;
  std::unordered_map<std::uint64_t, std::size_t> seen_;
};

template <typename Value, typename ParseValue>
TripleCollector<Value> collect_lines(std::istream& in, ParseValue&& parse_value) {
  TripleCollector<Value> c;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view l = strip_cr(line);
    if (l.empty()) continue;
    std::string_view f[3];
    if (!split3(l, f)) throw ParseError("expected three tab-separated fields", lineno);
    c.add(f[0], f[1], parse_value(f[2], lineno), lineno);
  }
  return c;
}

}  // namespace

bool has_binary_magic(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 4 && std::memcmp(bytes.data(), kBinaryMagic, 4) == 0;
}

Bytes encode_scores(const ScoreMatrix& scores) {
  const auto cells = static_cast<std::size_t>(scores.valid().size());
  Writer w(4 + 4 + 1 + 16 + names_size(scores.model_names()) + names_size(scores.segment_names()) + cells * 9);
  write_header(w, BinaryKind::Scores, scores.model_names(), scores.segment_names());
  const auto& valid = scores.valid();
  for (Eigen::Index k = 0; k < valid.size(); ++k) w.u8(valid.data()[k] ? 1 : 0);
  for (Eigen::Index k = 0; k < valid.size(); ++k) w.f64(valid.data()[k] ? scores.scores().data()[k] : 0.0);
  return w.take();
}

ScoreMatrix decode_scores(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Header h = read_header(r, BinaryKind::Scores);
  const auto rows = static_cast<Eigen::Index>(h.models.size());
  const auto cols = static_cast<Eigen::Index>(h.segments.size());
  if (r.remaining() != h.cells.size() * 8) {
    throw FormatError(r.remaining() < h.cells.size() * 8 ? "truncated input while reading scores"
                                                         : "trailing bytes after score block");
  }
  BoolGrid valid(rows, cols);
  ScoreGrid grid(rows, cols);
  auto block = r.take(h.cells.size() * 8, "scores");
  for (std::size_t k = 0; k < h.cells.size(); ++k) {
    const std::uint8_t c = h.cells[k];
    if (c > 1) throw InvalidCellValue("score cell value " + std::to_string(c) + " at cell " + std::to_string(k));
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(block[k * 8 + static_cast<std::size_t>(b)]) << (8 * b);
    if (c == 0 && bits != 0) throw FormatError("non-zero score at invalid cell " + std::to_string(k));
    valid.data()[k] = c == 1;
    grid.data()[k] = std::bit_cast<double>(bits);
  }
  return build_checked(
      [&] { return ScoreMatrix(std::move(h.models), std::move(h.segments), std::move(valid), std::move(grid)); });
}

Bytes encode_key(const TrialKey& key) {
  const auto cells = static_cast<std::size_t>(key.labels().size());
  Writer w(4 + 4 + 1 + 16 + names_size(key.model_names()) + names_size(key.segment_names()) + cells);
  write_header(w, BinaryKind::Key, key.model_names(), key.segment_names());
  const auto& labels = key.labels();
  for (Eigen::Index k = 0; k < labels.size(); ++k) w.u8(static_cast<std::uint8_t>(labels.data()[k]));
  return w.take();
}

TrialKey decode_key(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  Header h = read_header(r, BinaryKind::Key);
  if (r.remaining() != 0) throw FormatError("trailing bytes after key cells");
  LabelGrid labels(static_cast<Eigen::Index>(h.models.size()), static_cast<Eigen::Index>(h.segments.size()));
  for (std::size_t k = 0; k < h.cells.size(); ++k) {
    const std::uint8_t c = h.cells[k];
    if (c > 2) throw InvalidCellValue("key cell value " + std::to_string(c) + " at cell " + std::to_string(k));
    labels.data()[k] = static_cast<Label>(c);
  }
  return build_checked([&] { return TrialKey(std::move(h.models), std::move(h.segments), std::move(labels)); });
}

void append_real(std::string& out, double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

std::string format_real(double x) {
  std::string s;
  append_real(s, x);
  return s;
}

bool parse_real(std::string_view field, double& out) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  const char* end = field.data() + field.size();
  auto res = std::from_chars(field.data(), end, out);
  return res.ec == std::errc() && res.ptr == end && std::isfinite(out);
}

ScoreMatrix parse_text_scores(std::istream& in) {
  auto c = collect_lines<double>(in, [](std::string_view f, std::size_t line) {
    double v = 0.0;
    if (!parse_real(f, v)) throw ParseError("bad score '" + std::string(f) + "'", line);
    return v;
  });
  const auto rows = static_cast<Eigen::Index>(c.models_.size());
  const auto cols = static_cast<Eigen::Index>(c.segments_.size());
  BoolGrid valid = BoolGrid::Constant(rows, cols, false);
  ScoreGrid grid = ScoreGrid::Zero(rows, cols);
  for (const auto& t : c.triples_) {
    valid(static_cast<Eigen::Index>(t.model), static_cast<Eigen::Index>(t.segment)) = true;
    grid(static_cast<Eigen::Index>(t.model), static_cast<Eigen::Index>(t.segment)) = t.value;
  }
  return ScoreMatrix(std::move(c.models_), std::move(c.segments_), std::move(valid), std::move(grid));
}

ScoreMatrix parse_text_scores(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_text_scores(in);
}

void emit_text_scores(const ScoreMatrix& scores, std::ostream& out) {
  std::string line;
  for (Eigen::Index i = 0; i < scores.valid().rows(); ++i) {
    for (Eigen::Index j = 0; j < scores.valid().cols(); ++j) {
      if (!scores.valid()(i, j)) continue;
      line.clear();
      line += scores.model_names()[static_cast<std::size_t>(i)];
      line += '\t';
      line += scores.segment_names()[static_cast<std::size_t>(j)];
      line += '\t';
      append_real(line, scores.scores()(i, j));
      line += '\n';
      out.write(line.data(), static_cast<std::streamsize>(line.size()));
    }
  }
}

std::string emit_text_scores(const ScoreMatrix& scores) {
  std::ostringstream out;
  emit_text_scores(scores, out);
  return std::move(out).str();
}

TrialKey parse_text_key(std::istream& in) {
  auto c = collect_lines<Label>(in, [](std::string_view f, std::size_t line) {
    if (f == "target") return Label::Target;
    if (f == "nontarget") return Label::NonTarget;
    throw ParseError("bad label '" + std::string(f) + "', expected target or nontarget", line);
  });
  LabelGrid labels = LabelGrid::Constant(static_cast<Eigen::Index>(c.models_.size()),
                                         static_cast<Eigen::Index>(c.segments_.size()), Label::Ignored);
  for (const auto& t : c.triples_) labels(static_cast<Eigen::Index>(t.model), static_cast<Eigen::Index>(t.segment)) = t.value;
  return TrialKey(std::move(c.models_), std::move(c.segments_), std::move(labels));
}

TrialKey parse_text_key(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_text_key(in);
}

void emit_text_key(const TrialKey& key, std::ostream& out) {
  for (Eigen::Index i = 0; i < key.labels().rows(); ++i) {
    for (Eigen::Index j = 0; j < key.labels().cols(); ++j) {
      const Label lab = key.labels()(i, j);
      if (lab == Label::Ignored) continue;
      out << key.model_names()[static_cast<std::size_t>(i)] << '\t' << key.segment_names()[static_cast<std::size_t>(j)]
          << '\t' << (lab == Label::Target ? "target" : "nontarget") << '\n';
    }
  }
}

std::string emit_text_key(const TrialKey& key) {
  std::ostringstream out;
  emit_text_key(key, out);
  return std::move(out).str();
}

QualityMeasures parse_text_quality(std::istream& in) {
  NameList ids;
  std::vector<double> values;
  Eigen::Index dim = -1;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view l = strip_cr(line);
    if (l.empty()) continue;
    const auto tab = l.find('\t');
    if (tab == 0 || tab == std::string_view::npos) throw ParseError("expected an id and at least one value", lineno);
    ids.emplace_back(l.substr(0, tab));
    l.remove_prefix(tab + 1);
    Eigen::Index count = 0;
    for (;;) {
      const auto next = l.find('\t');
      const std::string_view field = l.substr(0, next);
      double v = 0.0;
      if (!parse_real(field, v)) throw ParseError("bad quality value '" + std::string(field) + "'", lineno);
      values.push_back(v);
      ++count;
      if (next == std::string_view::npos) break;
      l.remove_prefix(next + 1);
    }
    if (dim >= 0 && count != dim) {
      throw ParseError("expected " + std::to_string(dim) + " values, got " + std::to_string(count), lineno);
    }
    dim = count;
  }
  if (ids.empty()) return QualityMeasures();
  const auto n = static_cast<Eigen::Index>(ids.size());
  // Values arrive id-major; the matrix is dimension x ids.
  Eigen::MatrixXd m = Eigen::Map<Eigen::MatrixXd>(values.data(), dim, n);
  return build_checked([&] { return QualityMeasures(std::move(ids), std::move(m)); });
}

QualityMeasures parse_text_quality(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_text_quality(in);
}

std::string emit_text_quality(const QualityMeasures& quality) {
  std::string out;
  for (std::size_t i = 0; i < quality.ids().size(); ++i) {
    out += quality.ids()[i];
    for (Eigen::Index d = 0; d < quality.dimension(); ++d) {
      out += '\t';
      append_real(out, quality.values()(d, static_cast<Eigen::Index>(i)));
    }
    out += '\n';
  }
  return out;
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path + "' failed");
}

void write_file(const std::string& path, std::string_view text) {
  write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

ScoreMatrix load_scores(const std::string& path) {
  const Bytes bytes = read_file(path);
  if (has_binary_magic(bytes)) return decode_scores(bytes);
  return parse_text_scores(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

TrialKey load_key(const std::string& path) {
  const Bytes bytes = read_file(path);
  if (has_binary_magic(bytes)) return decode_key(bytes);
  return parse_text_key(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

QualityMeasures load_quality(const std::string& path) {
  const Bytes bytes = read_file(path);
  return parse_text_quality(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace llrkit
