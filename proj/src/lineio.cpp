#include <cstdio>
#include <cstring>

#include <unistd.h>
#include <zlib.h>

#include "pdnsa/error.hpp"
#include "pdnsa/lineio.hpp"

namespace pdnsa {

LineReader::LineReader(const std::string& path) : path_(path) {
  gzFile f = nullptr;
  if (path == "-") {
    f = gzdopen(dup(STDIN_FILENO), "rb");
  } else {
    f = gzopen(path.c_str(), "rb");
  }
  if (!f) throw IoError("cannot open input: " + path);
  gzbuffer(f, 1 << 17);
  file_ = f;
}

LineReader::~LineReader() {
  if (file_) gzclose(static_cast<gzFile>(file_));
}

bool LineReader::next(std::string& line) {
  auto* f = static_cast<gzFile>(file_);
  line.clear();
  char chunk[8192];
  bool got_any = false;
  while (gzgets(f, chunk, sizeof chunk)) {
    got_any = true;
    std::size_t n = std::strlen(chunk);
    if (n > 0 && chunk[n - 1] == '\n') {
      line.append(chunk, n - 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return true;
    }
    line.append(chunk, n);
  }
  int err = 0;
  const char* msg = gzerror(f, &err);
  if (err != Z_OK && err != Z_STREAM_END) throw IoError("read error in " + path_ + ": " + msg);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return got_any;
}

LineWriter::LineWriter(const std::string& path) : path_(path) {
  if (path == "-") {
    plain_ = stdout;
    is_stdout_ = true;
    return;
  }
  if (path.size() > 3 && path.compare(path.size() - 3, 3, ".gz") == 0) {
    gzFile f = gzopen(path.c_str(), "wb6");
    if (!f) throw IoError("cannot open output: " + path);
    gzbuffer(f, 1 << 17);
    gz_ = f;
  } else {
    plain_ = std::fopen(path.c_str(), "wb");
    if (!plain_) throw IoError("cannot open output: " + path);
  }
}

LineWriter::~LineWriter() {
  try {
    close();
  } catch (...) {
  }
}

void LineWriter::write(std::string_view data) {
  if (data.empty()) return;
  if (gz_) {
    if (gzwrite(static_cast<gzFile>(gz_), data.data(), static_cast<unsigned>(data.size())) == 0) {
      throw IoError("write error: " + path_);
    }
  } else if (plain_) {
    if (std::fwrite(data.data(), 1, data.size(), plain_) != data.size()) throw IoError("write error: " + path_);
  } else {
    throw IoError("write after close: " + path_);
  }
}

void LineWriter::close() {
  if (gz_) {
    int rc = gzclose(static_cast<gzFile>(gz_));
    gz_ = nullptr;
    if (rc != Z_OK) throw IoError("close error: " + path_);
  }
  if (plain_) {
    int rc = is_stdout_ ? std::fflush(plain_) : std::fclose(plain_);
    plain_ = nullptr;
    if (rc != 0) throw IoError("close error: " + path_);
  }
}

}  // namespace pdnsa
