#include "precip/tensor_io.hpp"

#include <cstring>
#include <fstream>
#include <vector>

namespace precip {

namespace {

constexpr char kMagic[8] = {'P', '4', 'D', 'T', 'E', 'N', '1', '\0'};
constexpr uint32_t kMaxNdim = 8;

void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct Reader {
  const std::string& buf;
  size_t pos = 0;

  void need(size_t n, const char* what) {
    if (pos + n > buf.size())
      throw TensorIoError(TensorIoError::Code::kTruncated,
                          std::string("truncated tensor file while reading ") + what);
  }
  uint32_t u32(const char* what) {
    need(4, what);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<uint32_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
    return v;
  }
  uint64_t u64(const char* what) {
    need(8, what);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<uint64_t>(static_cast<unsigned char>(buf[pos++])) << (8 * i);
    return v;
  }
};

}  // namespace

void write_tensor(const std::string& path, const Tensor& t, TensorDtype dtype,
                  const TensorMeta& meta) {
  std::string out;
  out.append(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<uint32_t>(dtype));
  put_u32(out, static_cast<uint32_t>(t.ndim()));
  for (int i = 0; i < t.ndim(); ++i) put_u64(out, static_cast<uint64_t>(t.dim(i)));

  const int64_t n = t.size();
  if (dtype == TensorDtype::kFloat32) {
    for (int64_t i = 0; i < n; ++i) {
      const float f = static_cast<float>(t[i]);
      char b[4];
      std::memcpy(b, &f, 4);
      out.append(b, 4);
    }
  } else {
    for (int64_t i = 0; i < n; ++i) {
      const double d = t[i];
      char b[8];
      std::memcpy(b, &d, 8);
      out.append(b, 8);
    }
  }

  std::string meta_block;
  for (const auto& [k, v] : meta) {
    meta_block += k;
    meta_block += '=';
    meta_block += v;
    meta_block += '\n';
  }
  put_u32(out, static_cast<uint32_t>(meta_block.size()));
  out += meta_block;

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open for writing: " + path);
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("short write: " + path);
}

ReadResult read_tensor_full(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open for reading: " + path);
  std::string buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());

  Reader r{buf};
  r.need(sizeof(kMagic), "magic");
  if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0)
    throw TensorIoError(TensorIoError::Code::kBadMagic, "bad magic in " + path);
  r.pos = sizeof(kMagic);

  const uint32_t dtype_tag = r.u32("dtype");
  if (dtype_tag != static_cast<uint32_t>(TensorDtype::kFloat32) &&
      dtype_tag != static_cast<uint32_t>(TensorDtype::kFloat64))
    throw TensorIoError(TensorIoError::Code::kBadDtype,
                        "unknown dtype tag " + std::to_string(dtype_tag));
  const auto dtype = static_cast<TensorDtype>(dtype_tag);
  const size_t elem_size = dtype == TensorDtype::kFloat32 ? 4 : 8;

  const uint32_t ndim = r.u32("ndim");
  if (ndim == 0 || ndim > kMaxNdim)
    throw TensorIoError(TensorIoError::Code::kDimsMismatch,
                        "ndim out of range: " + std::to_string(ndim));

  std::vector<int64_t> dims(ndim);
  uint64_t count = 1;
  for (uint32_t i = 0; i < ndim; ++i) {
    const uint64_t d = r.u64("dims");
    if (d == 0 || d > (1ULL << 32))
      throw TensorIoError(TensorIoError::Code::kDimsMismatch, "dim out of range");
    dims[i] = static_cast<int64_t>(d);
    count *= d;
  }

  const size_t payload = static_cast<size_t>(count) * elem_size;
  if (r.pos + payload + 4 > buf.size())
    throw TensorIoError(TensorIoError::Code::kDimsMismatch,
                        "payload shorter than dims require in " + path);

  Tensor t(dims);
  if (dtype == TensorDtype::kFloat32) {
    for (uint64_t i = 0; i < count; ++i) {
      float v;
      std::memcpy(&v, buf.data() + r.pos + i * 4, 4);
      t[static_cast<int64_t>(i)] = static_cast<double>(v);
    }
  } else {
    for (uint64_t i = 0; i < count; ++i) {
      double v;
      std::memcpy(&v, buf.data() + r.pos + i * 8, 8);
      t[static_cast<int64_t>(i)] = v;
    }
  }
  r.pos += payload;

  const uint32_t meta_len = r.u32("meta length");
  r.need(meta_len, "metadata");
  TensorMeta meta;
  {
    size_t line_start = r.pos;
    const size_t end = r.pos + meta_len;
    while (line_start < end) {
      size_t nl = buf.find('\n', line_start);
      if (nl == std::string::npos || nl >= end) nl = end;
      const std::string line = buf.substr(line_start, nl - line_start);
      const size_t eq = line.find('=');
      if (eq != std::string::npos) meta[line.substr(0, eq)] = line.substr(eq + 1);
      line_start = nl + 1;
    }
    r.pos = end;
  }

  if (r.pos != buf.size())
    throw TensorIoError(TensorIoError::Code::kDimsMismatch,
                        "trailing bytes after metadata in " + path);

  return ReadResult{std::move(t), dtype, std::move(meta)};
}

Tensor read_tensor(const std::string& path) { return read_tensor_full(path).tensor; }

}  // namespace precip
