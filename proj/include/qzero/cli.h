#pragma once

// Command-line front end:
//
//   qzero verify (--builtin NAME | --spec FILE) [--suite LIST] [--slots LIST]
//                [--seed N] [--restarts N] [--budget N] [--out PATH]
//   qzero renyi-gap (--builtin NAME | --spec FILE) [--budget N] [--seed N] [--out PATH]
//   qzero describe NAME [--format text|json]
//
// Exit status: 0 pass, 1 fail, 2 inconclusive, 3 usage or input error. The
// default seed is read from QZERO_SEED when set.

#include <iosfwd>

namespace qzero {

int runCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qzero
