#pragma once

#include <string>
#include <vector>

namespace scottkit {

struct CorpusRow {
  std::string name;
  long checked = 0;
  long failures = 0;
  std::string first_failure;  // empty when the suite passes
  bool pass() const { return failures == 0; }
};

// Exhaustive invariant suites over all graphs up to max_size vertices (the
// forcing suites stop at min(max_size, 2)).  Output is deterministic.
std::vector<CorpusRow> run_corpus(int max_size = 3, int jobs = 1);

}  // namespace scottkit
