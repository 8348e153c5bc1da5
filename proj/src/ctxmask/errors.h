// Copyright 2026 The ctxmask Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef CTXMASK_ERRORS_H_
#define CTXMASK_ERRORS_H_

#include <stdexcept>
#include <string>

namespace ctxmask {

// Bad arguments, inconsistent shapes or configuration. Maps to exit code 1.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Unreadable files, wrong audio format, malformed datasets. Exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-finite values during training or inference. Exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ctxmask

#endif  // CTXMASK_ERRORS_H_
