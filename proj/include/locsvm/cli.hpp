#pragma once

#include <string>
#include <vector>

namespace locsvm {

// Batch front-end: locsvm partition|train|tvsvm|margins|theory|rates with
// key=value arguments (plus config=FILE for a key=value file; command-line
// keys win). Returns the process exit status: 0 on success with all declared
// files written, 1 with a one-line diagnostic on stderr otherwise. Unknown
// keys are fatal. LOCSVM_SEED provides the default seed.
int cli_run(const std::vector<std::string>& args);
int cli_run(int argc, const char* const* argv);

}  // namespace locsvm
