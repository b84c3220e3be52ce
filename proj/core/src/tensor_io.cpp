#include "tctv/tensor_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

namespace tctv {

namespace {

constexpr char kMagic[4] = {'T', 'N', 'S', 'R'};
constexpr std::uint8_t kVersion = 1;

void put_u64_le(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64_le(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void put_f64_le(std::ostream& os, double x) {
  std::uint64_t bits;
  std::memcpy(&bits, &x, 8);
  put_u64_le(os, bits);
}

double get_f64_le(std::istream& is) {
  const std::uint64_t bits = get_u64_le(is);
  double x;
  std::memcpy(&x, &bits, 8);
  return x;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  return is;
}

}  // namespace

void write_tnsr(const std::string& path, const DenseTensor& t) {
  std::ofstream os = open_out(path);
  os.write(kMagic, 4);
  os.put(static_cast<char>(kVersion));
  os.put(static_cast<char>(t.kind()));
  os.put(static_cast<char>(t.shape().order()));
  for (std::int64_t n : t.shape().dims()) put_u64_le(os, static_cast<std::uint64_t>(n));
  if (t.is_real()) {
    for (double x : t.real()) put_f64_le(os, x);
  } else {
    for (const cxd& z : t.cplx()) {
      put_f64_le(os, z.real());
      put_f64_le(os, z.imag());
    }
  }
  if (!os) throw IoError("write failed: " + path);
}

DenseTensor read_tnsr(const std::string& path) {
  std::ifstream is = open_in(path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, kMagic, 4) != 0)
    throw FormatError("not a TNSR file: " + path);
  const int version = is.get();
  if (version != kVersion)
    throw FormatError("unsupported TNSR version " + std::to_string(version) + ": " + path);
  const int kind = is.get();
  if (kind != 0 && kind != 1) throw FormatError("unknown TNSR scalar kind: " + path);
  const int order = is.get();
  if (order < 1 || order > 32) throw FormatError("implausible TNSR order: " + path);
  std::vector<std::int64_t> dims(static_cast<std::size_t>(order));
  for (auto& d : dims) {
    d = static_cast<std::int64_t>(get_u64_le(is));
    if (!is || d <= 0) throw FormatError("bad TNSR dimension: " + path);
  }
  Shape shape(dims);
  if (kind == 0) {
    std::vector<double> data(static_cast<std::size_t>(shape.size()));
    for (auto& x : data) x = get_f64_le(is);
    if (!is) throw FormatError("truncated TNSR payload: " + path);
    return DenseTensor::from_real(std::move(shape), std::move(data));
  }
  std::vector<cxd> data(static_cast<std::size_t>(shape.size()));
  for (auto& z : data) {
    const double re = get_f64_le(is);
    const double im = get_f64_le(is);
    z = cxd{re, im};
  }
  if (!is) throw FormatError("truncated TNSR payload: " + path);
  return DenseTensor::from_complex(std::move(shape), std::move(data));
}

void write_mask_tnsr(const std::string& path, const BoolTensor& mask) {
  std::vector<double> data(mask.data.size());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = mask.data[i] ? 1.0 : 0.0;
  write_tnsr(path, DenseTensor::from_real(mask.shape, std::move(data)));
}

BoolTensor read_mask_tnsr(const std::string& path) {
  const DenseTensor t = read_tnsr(path);
  if (!t.is_real()) throw FormatError("mask tensor must be real: " + path);
  BoolTensor mask = BoolTensor::full(t.shape(), false);
  for (std::size_t i = 0; i < mask.data.size(); ++i) mask.data[i] = t.real()[i] != 0.0;
  return mask;
}

namespace {

int pnm_token(std::istream& is) {
  // Skips whitespace and `#` comments, then reads one nonnegative integer.
  for (;;) {
    const int c = is.peek();
    if (c == '#') {
      std::string line;
      std::getline(is, line);
    } else if (std::isspace(c)) {
      is.get();
    } else {
      break;
    }
  }
  int v = -1;
  is >> v;
  return v;
}

}  // namespace

DenseTensor read_image_pnm(const std::string& path) {
  std::ifstream is = open_in(path);
  char p, kind;
  is.get(p);
  is.get(kind);
  if (!is || p != 'P' || (kind != '5' && kind != '6'))
    throw FormatError("not a binary PGM/PPM file: " + path);
  const int width = pnm_token(is);
  const int height = pnm_token(is);
  const int maxval = pnm_token(is);
  if (!is || width <= 0 || height <= 0 || maxval <= 0 || maxval > 255)
    throw FormatError("unsupported PNM header (need 8-bit): " + path);
  is.get();  // single whitespace after maxval
  const int channels = kind == '6' ? 3 : 1;
  const std::int64_t count = static_cast<std::int64_t>(width) * height * channels;
  std::vector<unsigned char> raw(static_cast<std::size_t>(count));
  is.read(reinterpret_cast<char*>(raw.data()), count);
  if (!is) throw FormatError("truncated PNM payload: " + path);

  Shape shape({height, width, channels});
  std::vector<double> data(static_cast<std::size_t>(shape.size()));
  const double scale = 1.0 / static_cast<double>(maxval);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c)
      for (int ch = 0; ch < channels; ++ch) {
        const std::size_t src = static_cast<std::size_t>((r * width + c) * channels + ch);
        const std::size_t dst = static_cast<std::size_t>(
            r + static_cast<std::int64_t>(c) * height +
            static_cast<std::int64_t>(ch) * height * width);
        data[dst] = raw[src] * scale;
      }
  return DenseTensor::from_real(std::move(shape), std::move(data));
}

void write_image_pnm(const std::string& path, const DenseTensor& t) {
  if (!t.is_real()) throw std::invalid_argument("write_image_pnm: real tensors only");
  const Shape& sh = t.shape();
  if (sh.order() != 3 || (sh.dim(2) != 1 && sh.dim(2) != 3))
    throw std::invalid_argument("write_image_pnm: shape must be h x w x 1 or h x w x 3, got " +
                                sh.str());
  const std::int64_t height = sh.dim(0), width = sh.dim(1), channels = sh.dim(2);
  std::ofstream os = open_out(path);
  os << (channels == 3 ? "P6" : "P5") << "\n" << width << " " << height << "\n255\n";
  const auto& data = t.real();
  for (std::int64_t r = 0; r < height; ++r)
    for (std::int64_t c = 0; c < width; ++c)
      for (std::int64_t ch = 0; ch < channels; ++ch) {
        const double v = std::clamp(data[static_cast<std::size_t>(r + c * height +
                                                                  ch * height * width)],
                                    0.0, 1.0);
        os.put(static_cast<char>(std::lround(v * 255.0)));
      }
  if (!os) throw IoError("write failed: " + path);
}

DenseTensor read_tensor_auto(const std::string& path) {
  std::ifstream is = open_in(path);
  char head[2] = {0, 0};
  is.read(head, 2);
  is.close();
  if (head[0] == 'P' && (head[1] == '5' || head[1] == '6')) return read_image_pnm(path);
  return read_tnsr(path);
}

}  // namespace tctv
