#pragma once

#include <stdexcept>
#include <string>

#include "tctv/tensor.hpp"

namespace tctv {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary tensor container "TNSR v1": magic `TNSR`, u8 version = 1, u8 scalar
// kind (0 = f64 real, 1 = c128 complex), u8 order d, then d little-endian u64
// dims, then the raw little-endian payload in mode-0-fastest order (complex
// entries store re then im). Readers reject unknown versions and kinds.
void write_tnsr(const std::string& path, const DenseTensor& t);
DenseTensor read_tnsr(const std::string& path);

// Masks travel as real TNSR tensors of 0/1 values; any nonzero reads as true.
void write_mask_tnsr(const std::string& path, const BoolTensor& mask);
BoolTensor read_mask_tnsr(const std::string& path);

// Binary 8-bit PGM (P5) / PPM (P6), normalized to [0,1]. A PGM becomes an
// n0 x n1 x 1 tensor, a PPM n0 x n1 x 3 (mode 0 = image row). Writing accepts
// exactly those shapes and clamps to [0,1].
DenseTensor read_image_pnm(const std::string& path);
void write_image_pnm(const std::string& path, const DenseTensor& t);

// Reads TNSR or PGM/PPM depending on the file magic.
DenseTensor read_tensor_auto(const std::string& path);

}  // namespace tctv
