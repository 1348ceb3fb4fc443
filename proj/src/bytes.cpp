#include "zonemon/bytes.hpp"

namespace zonemon {

void ByteWriter::str(const std::string& s) {
  if (s.size() > 0xFFFF) throw ParseError("string too long for canonical encoding");
  u16(static_cast<uint16_t>(s.size()));
  raw(s.data(), s.size());
}

std::span<const uint8_t> ByteReader::take(size_t n) {
  if (pos_ + n > data_.size()) throw ParseError("truncated canonical encoding");
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

Bytes ByteReader::bytes(size_t n) {
  auto s = take(n);
  return Bytes(s.begin(), s.end());
}

std::string ByteReader::str() {
  const uint16_t len = u16();
  auto s = take(len);
  return std::string(s.begin(), s.end());
}

std::string to_hex(std::span<const uint8_t> b) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(b.size() * 2);
  for (uint8_t v : b) {
    out.push_back(digits[v >> 4]);
    out.push_back(digits[v & 0xF]);
  }
  return out;
}

static int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw ParseError("invalid hex digit");
}

Bytes from_hex(const std::string& s) {
  if (s.size() % 2 != 0) throw ParseError("odd-length hex string");
  Bytes out(s.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint8_t>(hex_nibble(s[2 * i]) << 4 | hex_nibble(s[2 * i + 1]));
  return out;
}

}  // namespace zonemon
