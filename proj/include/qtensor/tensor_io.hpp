#pragma once

#include <string>

#include "qtensor/dense_tensor.hpp"
#include "qtensor/sign_tensor.hpp"

namespace qten {

// Tensor file format (UTF-8 JSON):
//   {"shape":[n1,...,nk],"entries":[{"idx":[i1,...,ik],"val":"p/q"}]}
// "val" is a decimal integer (string or number) or a "p/q" rational
// string; omitted indices are zero; a duplicate idx is an error.
DenseTensor parse_tensor_json(const std::string& text);
DenseTensor load_tensor_file(const std::string& path);

std::string tensor_to_json(const DenseTensor& a, bool pretty = false);
std::string sign_tensor_to_json(const SignTensor& s, bool pretty = false);

void save_tensor_file(const DenseTensor& a, const std::string& path, bool pretty = false);

}  // namespace qten
