#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "slants/error.hpp"

namespace slants::detail {

// Little-endian encoding of fixed-width integers and IEEE-754 doubles.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void u64(std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out_.write(buf, 8);
  }
  void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
  void boolean(bool b) { u64(b ? 1 : 0); }
  void bytes(const std::string& s) { out_.write(s.data(), static_cast<std::streamsize>(s.size())); }
  void doubles(const double* data, std::size_t n) {
    u64(n);
    for (std::size_t i = 0; i < n; ++i) f64(data[i]);
  }
  void doubles(const std::vector<double>& v) { doubles(v.data(), v.size()); }

 private:
  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  std::uint64_t u64() {
    unsigned char buf[8];
    in_.read(reinterpret_cast<char*>(buf), 8);
    if (!in_) throw Error(ErrorCode::format_error, "truncated snapshot");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  bool boolean() { return u64() != 0; }
  std::size_t size(std::size_t limit = std::size_t{1} << 32) {
    const auto v = u64();
    if (v > limit) throw Error(ErrorCode::format_error, "corrupt snapshot length");
    return static_cast<std::size_t>(v);
  }
  std::string bytes(std::size_t n) {
    std::string s(n, '\0');
    in_.read(s.data(), static_cast<std::streamsize>(n));
    if (!in_) throw Error(ErrorCode::format_error, "truncated snapshot");
    return s;
  }
  std::vector<double> doubles() {
    std::vector<double> v(size());
    for (auto& x : v) x = f64();
    return v;
  }

 private:
  std::istream& in_;
};

}  // namespace slants::detail
