#pragma once

namespace dislofix {

// Full command-line surface. Returns the process exit code:
//   0  success / verified / campaign clean
//   1  mathematical refutation (axiom failure, refuted certificate,
//      nonempty counterexample list)
//   2  input error (bad file, schema violation, missing section, bad flags)
//   3  invalid comparison function
int run_cli(int argc, const char* const* argv);

}  // namespace dislofix
