#pragma once

namespace zitterdyn {

/// zitterdyn <simulate|spectrum|energy|render|verify|sweep> [--config FILE] [flags]
/// Exit codes: 0 success, 1 usage or invalid input, 2 numerical failure. Errors are
/// also written to stderr as one JSON object.
int cli_main(int argc, char** argv);

}  // namespace zitterdyn
