#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aol/types.hpp"

namespace aol {

/// Source of instances. next() returns std::nullopt at end of stream.
class Stream {
 public:
  virtual ~Stream() = default;
  virtual const StreamSchema& schema() const = 0;
  virtual std::optional<Instance> next() = 0;
  virtual std::string_view name() const = 0;
};

using StreamPtr = std::unique_ptr<Stream>;

/// In-memory stream over a fixed instance list; indexes are rewritten to be
/// consecutive from 0.
class VectorStream final : public Stream {
 public:
  VectorStream(StreamSchema schema, std::vector<Instance> instances, std::string name = "vector");

  const StreamSchema& schema() const override { return schema_; }
  std::optional<Instance> next() override;
  std::string_view name() const override { return name_; }

 private:
  StreamSchema schema_;
  std::vector<Instance> instances_;
  std::size_t pos_ = 0;
  std::string name_;
};

/// Draws up to n instances.
std::vector<Instance> take(Stream& stream, std::size_t n);

}  // namespace aol
