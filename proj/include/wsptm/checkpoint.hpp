#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wsptm/inference.hpp"

namespace wsptm {

// Everything needed to reload and evaluate a fitted model. Serialized as
// versioned JSON; the vocabulary hash ties it to the corpus it came from.
struct Checkpoint {
  std::map<std::string, std::string> config_kv;
  std::uint64_t vocab_hash = 0;
  ModelState state;
  std::vector<FitTraceRow> trace;
};

void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
Checkpoint load_checkpoint(const std::string& path);

// `iter,objective,penalty` rows.
std::string trace_csv(const std::vector<FitTraceRow>& trace);

}  // namespace wsptm
