#pragma once

#include <chrono>
#include <cstddef>

namespace reviewscope {

/// Client policy shared by the remote embedding provider and remote scorer.
/// A request is attempted once plus `retries` more times on transient
/// failures, sleeping initial_backoff * 2^attempt in between.
struct RemoteOptions {
  int retries = 3;
  std::chrono::milliseconds initial_backoff{200};
  std::chrono::seconds timeout{60};
  std::size_t batch_size = 256;
};

}  // namespace reviewscope
