#pragma once

#include <cstdio>
#include <string>
#include <string_view>

namespace pdnsa {

/// Line reader over a file or stdin ("-"). Gzip input is detected from the
/// magic bytes and decompressed transparently; plain files pass through.
class LineReader {
 public:
  explicit LineReader(const std::string& path);  // throws IoError
  ~LineReader();
  LineReader(const LineReader&) = delete;
  LineReader& operator=(const LineReader&) = delete;

  /// Next line without the terminating '\n' (and '\r'). False at EOF.
  bool next(std::string& line);
  const std::string& path() const { return path_; }

 private:
  void* file_ = nullptr;  // gzFile
  std::string path_;
  std::string buf_;
};

/// Line writer; gzip-compresses when the path ends in ".gz". "-" is stdout.
class LineWriter {
 public:
  explicit LineWriter(const std::string& path);  // throws IoError
  ~LineWriter();
  LineWriter(const LineWriter&) = delete;
  LineWriter& operator=(const LineWriter&) = delete;

  void write(std::string_view data);
  void write_line(std::string_view line) {
    write(line);
    write("\n");
  }
  void close();

 private:
  void* gz_ = nullptr;
  std::FILE* plain_ = nullptr;
  bool is_stdout_ = false;
  std::string path_;
};

}  // namespace pdnsa
