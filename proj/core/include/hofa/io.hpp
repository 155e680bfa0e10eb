#pragma once

#include "hofa/domain.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace hofa {

/// Filesystem / format failure; the CLI maps this class to exit code 4.
struct IOError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads a sampled function from .json ({domain:{kind,N}, values:[[re,im],...],
/// bound?}) or .csv (header index,re,im). CSV carries no domain metadata: the
/// kind is taken from kind_hint, else inferred from the first index (0 =>
/// cyclic, 1 => interval).
SampledFunction read_function(const std::string& path,
                              std::optional<DomainKind> kind_hint = std::nullopt);

/// Writes by extension (.json or .csv).
void write_function(const std::string& path, const SampledFunction& f);

/// Whole-file helpers shared by the CLI.
std::string slurp_file(const std::string& path);
void spit_file(const std::string& path, const std::string& content);

}  // namespace hofa
