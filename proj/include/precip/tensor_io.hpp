#pragma once

#include <map>
#include <string>

#include "precip/tensor.hpp"

namespace precip {

// Self-describing binary tensor container.
//
// Layout (all integers little-endian):
//   bytes 0..7   magic "P4DTEN1\0"
//   u32          dtype tag: 1 = float32, 2 = float64
//   u32          ndim
//   u64 * ndim   dims
//   payload      product(dims) * dtype-size bytes, row-major
//   u32          metadata byte length
//   bytes        metadata, "key=value\n" lines, UTF-8
//
// Field data is written as float32. Checkpoints use the float64 tag so that
// a saved model reproduces bit-identical forward passes after reload.
enum class TensorDtype : uint32_t { kFloat32 = 1, kFloat64 = 2 };

struct TensorIoError : IoError {
  enum class Code { kTruncated, kBadMagic, kBadDtype, kDimsMismatch };
  Code code;
  TensorIoError(Code c, const std::string& msg) : IoError(msg), code(c) {}
};

using TensorMeta = std::map<std::string, std::string>;

void write_tensor(const std::string& path, const Tensor& t,
                  TensorDtype dtype = TensorDtype::kFloat32,
                  const TensorMeta& meta = {});

struct ReadResult {
  Tensor tensor;
  TensorDtype dtype;
  TensorMeta meta;
};

ReadResult read_tensor_full(const std::string& path);
Tensor read_tensor(const std::string& path);

}  // namespace precip
