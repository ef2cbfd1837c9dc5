#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mebench/error.hpp"
#include "mebench/frame.hpp"

// Luminance-only sequence readers: YUV4MPEG2, headerless planar YUV 4:2:0,
// and directories of binary PGM files.
namespace mebench::io {

enum class SequenceFormat { y4m, yuv420, pgm_dir };

inline SequenceFormat parse_format(std::string_view name) {
  if (name == "y4m") return SequenceFormat::y4m;
  if (name == "yuv420" || name == "raw-yuv420") return SequenceFormat::yuv420;
  if (name == "pgm-dir") return SequenceFormat::pgm_dir;
  throw ParameterError("unknown sequence format '" + std::string(name) + "'");
}

struct SequenceInfo {
  SequenceFormat format = SequenceFormat::y4m;
  FrameSize size;
  std::optional<std::size_t> frame_count;  // unknown for streamed y4m
  std::string frame_rate;                  // informational, e.g. "30000:1001"
};

class FrameSource {
 public:
  virtual ~FrameSource() = default;
  virtual const SequenceInfo& info() const noexcept = 0;
  // Next luminance plane, or nullopt at the end of the sequence.
  virtual std::optional<Frame> next() = 0;
};

namespace detail {

// Bytes of one 4:2:0 picture with chroma planes rounded up for odd sizes.
inline std::size_t yuv420_frame_bytes(FrameSize s) {
  const std::size_t luma = static_cast<std::size_t>(s.width) * s.height;
  const std::size_t chroma =
      static_cast<std::size_t>((s.width + 1) / 2) * static_cast<std::size_t>((s.height + 1) / 2);
  return luma + 2 * chroma;
}

inline bool parse_positive(std::string_view text, int& out) {
  if (text.empty() || text.size() > 9) return false;
  int value = 0;
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    value = value * 10 + (c - '0');
  }
  if (value <= 0) return false;
  out = value;
  return true;
}

}  // namespace detail

class Y4mReader final : public FrameSource {
 public:
  explicit Y4mReader(std::istream& in) : in_(in) {
    const std::string header = read_line(kMaxHeader);
    if (header.rfind("YUV4MPEG2", 0) != 0 || (header.size() > 9 && header[9] != ' ')) {
      throw FormatError("y4m: bad signature, expected 'YUV4MPEG2'", 0);
    }
    int width = 0;
    int height = 0;
    std::size_t pos = 9;
    while (pos < header.size()) {
      if (header[pos] == ' ') {
        ++pos;
        continue;
      }
      const std::size_t end = std::min(header.find(' ', pos), header.size());
      const std::string_view token(header.data() + pos, end - pos);
      const std::string_view value = token.substr(1);
      switch (token[0]) {
        case 'W':
          if (!detail::parse_positive(value, width)) throw FormatError("y4m: invalid width token", pos);
          break;
        case 'H':
          if (!detail::parse_positive(value, height)) throw FormatError("y4m: invalid height token", pos);
          break;
        case 'C': check_colorspace(value, pos); break;
        case 'F': info_.frame_rate = std::string(value); break;
        default: break;  // interlacing, aspect and extension tokens are ignored
      }
      pos = end;
    }
    if (width == 0 || height == 0) throw FormatError("y4m: header lacks W or H token", 0);
    info_.format = SequenceFormat::y4m;
    info_.size = {width, height};
    frame_bytes_ = detail::yuv420_frame_bytes(info_.size);
  }

  const SequenceInfo& info() const noexcept override { return info_; }

  std::optional<Frame> next() override {
    if (in_.peek() == std::char_traits<char>::eof()) return std::nullopt;
    const std::uint64_t marker_offset = offset_;
    const std::string marker = read_line(kMaxFrameHeader);
    if (marker.rfind("FRAME", 0) != 0 || (marker.size() > 5 && marker[5] != ' ')) {
      throw FormatError("y4m: expected FRAME marker for frame " + std::to_string(frames_read_),
                        marker_offset);
    }
    const std::size_t luma = static_cast<std::size_t>(info_.size.width) * info_.size.height;
    std::vector<std::uint8_t> samples(luma);
    in_.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(luma));
    offset_ += static_cast<std::uint64_t>(in_.gcount());
    if (static_cast<std::size_t>(in_.gcount()) != luma) throw truncated();
    const std::size_t chroma = frame_bytes_ - luma;
    in_.ignore(static_cast<std::streamsize>(chroma));
    offset_ += static_cast<std::uint64_t>(in_.gcount());
    if (static_cast<std::size_t>(in_.gcount()) != chroma) throw truncated();
    ++frames_read_;
    return Frame(info_.size.width, info_.size.height, std::move(samples));
  }

 private:
  static constexpr std::size_t kMaxHeader = 1024;
  static constexpr std::size_t kMaxFrameHeader = 256;

  FormatError truncated() const {
    return FormatError("y4m: truncated frame " + std::to_string(frames_read_), offset_);
  }

  std::string read_line(std::size_t limit) {
    std::string line;
    for (;;) {
      const int c = in_.get();
      if (c == std::char_traits<char>::eof()) {
        throw FormatError("y4m: unexpected end of stream in header line", offset_);
      }
      ++offset_;
      if (c == '\n') return line;
      if (line.size() == limit) throw FormatError("y4m: header line too long", offset_);
      line.push_back(static_cast<char>(c));
    }
  }

  static void check_colorspace(std::string_view cs, std::size_t pos) {
    if (cs == "420" || cs == "420jpeg" || cs == "420paldv" || cs == "420mpeg2") return;
    if (cs.rfind("420p", 0) == 0) {
      throw FormatError("y4m: only 8-bit samples are supported, got colorspace C" + std::string(cs),
                        pos);
    }
    throw FormatError("y4m: unsupported colorspace C" + std::string(cs), pos);
  }

  std::istream& in_;
  SequenceInfo info_;
  std::size_t frame_bytes_ = 0;
  std::uint64_t offset_ = 0;
  std::size_t frames_read_ = 0;
};

// Headerless planar Y, U, V pictures, concatenated. The stream must be
// seekable so the frame count can be validated up front.
class RawYuv420Reader final : public FrameSource {
 public:
  RawYuv420Reader(std::istream& in, int width, int height) : in_(in) {
    if (width <= 0 || height <= 0) throw ParameterError("yuv420: width and height must be positive");
    info_.format = SequenceFormat::yuv420;
    info_.size = {width, height};
    frame_bytes_ = detail::yuv420_frame_bytes(info_.size);

    const auto start = in_.tellg();
    in_.seekg(0, std::ios::end);
    const auto end = in_.tellg();
    in_.seekg(start);
    if (start < 0 || end < 0 || !in_) throw IoError("yuv420: input stream is not seekable");
    const auto length = static_cast<std::uint64_t>(end - start);
    if (length % frame_bytes_ != 0) {
      throw FormatError("yuv420: stream length " + std::to_string(length) +
                        " is not a whole number of " + std::to_string(width) + "x" +
                        std::to_string(height) + " frames (" + std::to_string(frame_bytes_) +
                        " bytes each)");
    }
    info_.frame_count = static_cast<std::size_t>(length / frame_bytes_);
  }

  const SequenceInfo& info() const noexcept override { return info_; }

  std::optional<Frame> next() override {
    if (frames_read_ == *info_.frame_count) return std::nullopt;
    const std::size_t luma = static_cast<std::size_t>(info_.size.width) * info_.size.height;
    std::vector<std::uint8_t> samples(luma);
    in_.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(luma));
    in_.ignore(static_cast<std::streamsize>(frame_bytes_ - luma));
    if (!in_) throw IoError("yuv420: read failed in frame " + std::to_string(frames_read_));
    ++frames_read_;
    return Frame(info_.size.width, info_.size.height, std::move(samples));
  }

 private:
  std::istream& in_;
  SequenceInfo info_;
  std::size_t frame_bytes_ = 0;
  std::size_t frames_read_ = 0;
};

struct PgmHeader {
  FrameSize size;
  std::size_t data_offset = 0;
};

// Parses a binary PGM header; `name` is used in diagnostics.
inline PgmHeader read_pgm_header(std::istream& in, const std::string& name) {
  std::size_t offset = 0;
  auto get = [&]() {
    const int c = in.get();
    if (c != std::char_traits<char>::eof()) ++offset;
    return c;
  };
  const int m0 = get();
  const int m1 = get();
  if (m0 != 'P' || m1 != '5') throw FormatError("pgm: " + name + " is not a binary (P5) PGM file");
  auto number = [&](const char* what) {
    int c = get();
    for (;;) {
      if (c == '#') {
        while (c != '\n' && c != std::char_traits<char>::eof()) c = get();
      } else if (c != std::char_traits<char>::eof() && std::isspace(c)) {
        c = get();
      } else {
        break;
      }
    }
    if (c == std::char_traits<char>::eof() || !std::isdigit(c)) {
      throw FormatError("pgm: " + name + ": malformed " + what, offset);
    }
    long value = 0;
    while (c != std::char_traits<char>::eof() && std::isdigit(c)) {
      value = value * 10 + (c - '0');
      if (value > 1'000'000) throw FormatError("pgm: " + name + ": " + what + " too large", offset);
      c = get();
    }
    // Exactly one whitespace byte follows each number; it was consumed above.
    if (c == std::char_traits<char>::eof() || !std::isspace(c)) {
      throw FormatError("pgm: " + name + ": malformed " + what, offset);
    }
    return static_cast<int>(value);
  };
  const int width = number("width");
  const int height = number("height");
  const int maxval = number("maxval");
  if (width <= 0 || height <= 0) throw FormatError("pgm: " + name + ": dimensions must be positive");
  if (maxval != 255) {
    throw FormatError("pgm: " + name + ": maxval must be 255, got " + std::to_string(maxval));
  }
  return {{width, height}, offset};
}

// Every *.pgm file of a directory, in lexicographic filename order. All
// headers are validated when the reader is opened.
class PgmDirReader final : public FrameSource {
 public:
  explicit PgmDirReader(const std::filesystem::path& dir) {
    std::error_code ec;
    if (!std::filesystem::is_directory(dir, ec)) {
      throw IoError("pgm-dir: " + dir.string() + " is not a directory");
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".pgm") files_.push_back(entry.path());
    }
    std::sort(files_.begin(), files_.end(),
              [](const auto& a, const auto& b) { return a.filename().string() < b.filename().string(); });
    info_.format = SequenceFormat::pgm_dir;
    info_.frame_count = files_.size();
    for (std::size_t i = 0; i < files_.size(); ++i) {
      std::ifstream in(files_[i], std::ios::binary);
      if (!in) throw IoError("pgm-dir: cannot open " + files_[i].string());
      const PgmHeader h = read_pgm_header(in, files_[i].filename().string());
      if (i == 0) {
        info_.size = h.size;
      } else if (h.size != info_.size) {
        throw FormatError("pgm-dir: " + files_[i].filename().string() + " is " +
                          std::to_string(h.size.width) + "x" + std::to_string(h.size.height) +
                          ", expected " + std::to_string(info_.size.width) + "x" +
                          std::to_string(info_.size.height) + " (mixed dimensions)");
      }
    }
  }

  const SequenceInfo& info() const noexcept override { return info_; }

  std::optional<Frame> next() override {
    if (next_ == files_.size()) return std::nullopt;
    const auto& path = files_[next_++];
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("pgm-dir: cannot open " + path.string());
    const PgmHeader h = read_pgm_header(in, path.filename().string());
    std::vector<std::uint8_t> samples(static_cast<std::size_t>(h.size.width) * h.size.height);
    in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(samples.size()));
    if (static_cast<std::size_t>(in.gcount()) != samples.size()) {
      throw FormatError("pgm: " + path.filename().string() + ": truncated pixel data");
    }
    return Frame(h.size.width, h.size.height, std::move(samples));
  }

 private:
  std::vector<std::filesystem::path> files_;
  SequenceInfo info_;
  std::size_t next_ = 0;
};

namespace detail {

// Keeps the file stream alive alongside the reader that borrows it.
template <class Reader>
class FileBacked final : public FrameSource {
 public:
  template <class... Args>
  explicit FileBacked(const std::filesystem::path& path, Args... args)
      : file_(open(path)), reader_(file_, args...) {}

  const SequenceInfo& info() const noexcept override { return reader_.info(); }
  std::optional<Frame> next() override { return reader_.next(); }

 private:
  static std::ifstream open(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    return f;
  }

  std::ifstream file_;
  Reader reader_;
};

}  // namespace detail

inline std::unique_ptr<FrameSource> open_sequence(const std::filesystem::path& path,
                                                  SequenceFormat format,
                                                  std::optional<FrameSize> size = std::nullopt) {
  switch (format) {
    case SequenceFormat::y4m:
      return std::make_unique<detail::FileBacked<Y4mReader>>(path);
    case SequenceFormat::yuv420:
      if (!size) throw ParameterError("yuv420 input requires explicit width and height");
      return std::make_unique<detail::FileBacked<RawYuv420Reader>>(path, size->width, size->height);
    case SequenceFormat::pgm_dir:
      return std::make_unique<PgmDirReader>(path);
  }
  throw ParameterError("unknown sequence format");
}

}  // namespace mebench::io
