#include "ida/png_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace ida {

namespace {

u32 crc32_of(const u8* data, std::size_t n, u32 seed) {
  return static_cast<u32>(::crc32(seed, data, static_cast<uInt>(n)));
}

void put_u32(std::vector<u8>& out, u32 v) {
  out.push_back(static_cast<u8>(v >> 24));
  out.push_back(static_cast<u8>(v >> 16));
  out.push_back(static_cast<u8>(v >> 8));
  out.push_back(static_cast<u8>(v));
}

u32 get_u32(const u8* p) {
  return (u32(p[0]) << 24) | (u32(p[1]) << 16) | (u32(p[2]) << 8) | u32(p[3]);
}

void put_chunk(std::vector<u8>& out, const char type[4], const std::vector<u8>& payload) {
  put_u32(out, static_cast<u32>(payload.size()));
  std::size_t start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  u32 crc = crc32_of(out.data() + start, out.size() - start, ::crc32(0, nullptr, 0));
  put_u32(out, crc);
}

int paeth(int a, int b, int c) {
  int p = a + b - c;
  int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

}  // namespace

void write_png_rgb8(const std::string& path, const std::vector<u8>& rgb, int height, int width) {
  if (rgb.size() != static_cast<std::size_t>(height) * width * 3)
    throw std::invalid_argument("png write: buffer size mismatch");

  // filter 0 on every scanline
  std::vector<u8> raw;
  raw.reserve(static_cast<std::size_t>(height) * (width * 3 + 1));
  for (int y = 0; y < height; ++y) {
    raw.push_back(0);
    const u8* row = rgb.data() + static_cast<std::size_t>(y) * width * 3;
    raw.insert(raw.end(), row, row + static_cast<std::size_t>(width) * 3);
  }

  uLongf comp_cap = compressBound(static_cast<uLong>(raw.size()));
  std::vector<u8> comp(comp_cap);
  if (compress2(comp.data(), &comp_cap, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw std::runtime_error("png write: deflate failed");
  comp.resize(comp_cap);

  std::vector<u8> out;
  static const u8 sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
  out.insert(out.end(), sig, sig + 8);

  std::vector<u8> ihdr;
  put_u32(ihdr, static_cast<u32>(width));
  put_u32(ihdr, static_cast<u32>(height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // color type RGB
  ihdr.push_back(0);   // compression
  ihdr.push_back(0);   // filter method
  ihdr.push_back(0);   // no interlace
  put_chunk(out, "IHDR", ihdr);
  put_chunk(out, "IDAT", comp);
  put_chunk(out, "IEND", {});

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("png write: cannot open " + path);
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) throw std::runtime_error("png write: short write " + path);
}

std::vector<u8> read_png_rgb8(const std::string& path, int& height, int& width) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("png read: cannot open " + path);
  std::vector<u8> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  static const u8 sig[8] = {137, 80, 78, 71, 13, 10, 26, 10};
  if (buf.size() < 8 || std::memcmp(buf.data(), sig, 8) != 0)
    throw std::runtime_error("png read: bad signature in " + path);

  std::size_t pos = 8;
  int w = 0, h = 0, bit_depth = 0, color_type = 0;
  std::vector<u8> idat;
  while (pos + 8 <= buf.size()) {
    u32 len = get_u32(buf.data() + pos);
    if (pos + 12 + len > buf.size()) throw std::runtime_error("png read: truncated chunk");
    const char* type = reinterpret_cast<const char*>(buf.data() + pos + 4);
    const u8* payload = buf.data() + pos + 8;
    if (std::memcmp(type, "IHDR", 4) == 0) {
      w = static_cast<int>(get_u32(payload));
      h = static_cast<int>(get_u32(payload + 4));
      bit_depth = payload[8];
      color_type = payload[9];
      if (payload[12] != 0) throw std::runtime_error("png read: interlaced not supported");
    } else if (std::memcmp(type, "IDAT", 4) == 0) {
      idat.insert(idat.end(), payload, payload + len);
    } else if (std::memcmp(type, "IEND", 4) == 0) {
      break;
    }
    pos += 12 + len;
  }
  if (w <= 0 || h <= 0) throw std::runtime_error("png read: missing IHDR");
  if (bit_depth != 8 || (color_type != 2 && color_type != 6))
    throw std::runtime_error("png read: only 8-bit RGB/RGBA supported");
  int ch = color_type == 2 ? 3 : 4;

  std::size_t raw_size = static_cast<std::size_t>(h) * (static_cast<std::size_t>(w) * ch + 1);
  std::vector<u8> raw(raw_size);
  uLongf dst_len = static_cast<uLongf>(raw_size);
  if (uncompress(raw.data(), &dst_len, idat.data(), static_cast<uLong>(idat.size())) != Z_OK ||
      dst_len != raw_size)
    throw std::runtime_error("png read: inflate failed");

  // undo per-scanline filters
  std::size_t stride = static_cast<std::size_t>(w) * ch;
  std::vector<u8> img(static_cast<std::size_t>(h) * stride);
  for (int y = 0; y < h; ++y) {
    u8 filter = raw[static_cast<std::size_t>(y) * (stride + 1)];
    const u8* src = raw.data() + static_cast<std::size_t>(y) * (stride + 1) + 1;
    u8* dst = img.data() + static_cast<std::size_t>(y) * stride;
    const u8* up = y > 0 ? img.data() + static_cast<std::size_t>(y - 1) * stride : nullptr;
    for (std::size_t x = 0; x < stride; ++x) {
      int a = x >= static_cast<std::size_t>(ch) ? dst[x - ch] : 0;
      int b = up ? up[x] : 0;
      int c = (up && x >= static_cast<std::size_t>(ch)) ? up[x - ch] : 0;
      int v = src[x];
      switch (filter) {
        case 0: break;
        case 1: v += a; break;
        case 2: v += b; break;
        case 3: v += (a + b) / 2; break;
        case 4: v += paeth(a, b, c); break;
        default: throw std::runtime_error("png read: bad filter byte");
      }
      dst[x] = static_cast<u8>(v & 0xff);
    }
  }

  std::vector<u8> rgb(static_cast<std::size_t>(h) * w * 3);
  for (std::size_t i = 0; i < static_cast<std::size_t>(h) * w; ++i)
    for (int c = 0; c < 3; ++c) rgb[i * 3 + c] = img[i * ch + c];
  height = h;
  width = w;
  return rgb;
}

}  // namespace ida
