#include "scf/image.hpp"

#include <cstdio>
#include <fstream>

namespace scf {

namespace {

bool is_ppm_space(uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

// Skips whitespace and '#' comments, then parses one decimal field.
uint32_t parse_header_uint(ByteReader& r, const char* what) {
  for (;;) {
    uint8_t c = r.u8(what);
    if (is_ppm_space(c)) continue;
    if (c == '#') {
      while (r.u8("comment") != '\n') {
      }
      continue;
    }
    if (c < '0' || c > '9')
      throw ParseError(std::string("expected digit for ") + what +
                       " at offset " + std::to_string(r.offset() - 1));
    uint64_t value = c - '0';
    for (;;) {
      if (r.exhausted())
        throw ParseError(std::string("truncated input while reading ") + what +
                         " at offset " + std::to_string(r.offset()));
      uint8_t d = r.u8(what);
      if (d >= '0' && d <= '9') {
        value = value * 10 + (d - '0');
        if (value > 0xFFFFFFFFull)
          throw ParseError(std::string(what) + " overflows at offset " +
                           std::to_string(r.offset()));
        continue;
      }
      if (!is_ppm_space(d))
        throw ParseError(std::string("expected whitespace after ") + what +
                         " at offset " + std::to_string(r.offset() - 1));
      return static_cast<uint32_t>(value);
    }
  }
}

}  // namespace

RgbImage load_ppm(const Bytes& bytes) {
  ByteReader r(bytes);
  if (r.u8("magic") != 'P' || r.u8("magic") != '6')
    throw ParseError("not a P6 pixmap (bad magic at offset 0)");
  uint32_t width = parse_header_uint(r, "width");
  uint32_t height = parse_header_uint(r, "height");
  uint32_t maxval = parse_header_uint(r, "maxval");
  if (width == 0 || height == 0)
    throw ParseError("zero image dimension in header");
  if (maxval != 255)
    throw ParseError("unsupported maxval " + std::to_string(maxval) +
                     " (only 255 is supported)");
  // parse_header_uint consumed the single whitespace byte after maxval.
  size_t n = static_cast<size_t>(width) * height;
  if (n > (1u << 28))
    throw ParseError("image too large: " + std::to_string(n) + " pixels");
  const uint8_t* payload = r.bytes(n * 3, "pixel payload");
  RgbImage img(width, height);
  for (size_t i = 0; i < n; ++i)
    img.pixels()[i] = Rgb{payload[3 * i], payload[3 * i + 1], payload[3 * i + 2]};
  return img;
}

Bytes save_ppm(const RgbImage& image) {
  char header[48];
  int len = std::snprintf(header, sizeof header, "P6\n%u %u\n255\n",
                          image.width(), image.height());
  Bytes out(header, header + len);
  out.reserve(out.size() + image.pixel_count() * 3);
  for (Rgb p : image.pixels()) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

Bytes read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  Bytes bytes((std::istreambuf_iterator<char>(in)),
              std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed for " + path);
  return bytes;
}

void write_file(const std::string& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot create " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed for " + path);
}

RgbImage load_ppm_file(const std::string& path) {
  try {
    return load_ppm(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_ppm_file(const std::string& path, const RgbImage& image) {
  write_file(path, save_ppm(image));
}

}  // namespace scf
