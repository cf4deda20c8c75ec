#pragma once

namespace ctqubo::cli {

// Exit codes: 0 success, 1 runtime error (error JSON on stderr and, when
// possible, error.json in the output directory), 2 usage error.
int run(int argc, char** argv);

}  // namespace ctqubo::cli
