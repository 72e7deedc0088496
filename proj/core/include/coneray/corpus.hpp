#pragma once

#include <string>
#include <vector>

#include "coneray/elast_tensor.hpp"

namespace coneray {

struct CorpusEntry {
  std::string name;         // canonical name, including default arguments
  std::string description;  // one-line summary for CLI listings
};

// Stable list of built-in example tensors for CLI display.
std::vector<CorpusEntry> corpus_list();

// Look up a built-in tensor by name.  Parameterized names accept integer
// arguments in parentheses, e.g. "null-lagrangian(1,1,2,2)" or "remark24(4)";
// the bare base name uses the defaults from corpus_list().  Unknown names or
// malformed arguments raise InputError.
ElastTensor corpus(const std::string& name);

}  // namespace coneray
