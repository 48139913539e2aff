#pragma once

#include <cstddef>
#include <fstream>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "streamad/core.hpp"

namespace streamad {

/// Pull source of raw messages in stream order. Returned views stay valid
/// for the lifetime of the source.
class MessageSource {
 public:
  virtual ~MessageSource() = default;
  virtual std::optional<std::string_view> next() = 0;
  virtual void rewind() = 0;
};

/// Messages held in memory, one string per message.
class MemorySource final : public MessageSource {
 public:
  explicit MemorySource(std::vector<std::string> messages) : messages_(std::move(messages)) {}

  std::optional<std::string_view> next() override;
  void rewind() override { next_ = 0; }

 private:
  std::vector<std::string> messages_;
  std::size_t next_ = 0;
};

/// A concatenated corpus split into message views, e.g. a replayed file.
class CorpusSource final : public MessageSource {
 public:
  explicit CorpusSource(std::string corpus);
  static CorpusSource from_file(const std::string& path);

  std::optional<std::string_view> next() override;
  void rewind() override { next_ = 0; }

  std::size_t bytes() const noexcept { return corpus_->size(); }
  std::span<const std::string_view> messages() const noexcept { return messages_; }

 private:
  std::unique_ptr<std::string> corpus_;
  std::vector<std::string_view> messages_;
  std::size_t next_ = 0;
};

/// Push sink for emitted anomalies. Calls are serialized by the engine.
class AnomalySink {
 public:
  virtual ~AnomalySink() = default;
  virtual void emit(const Anomaly& anomaly) = 0;
  virtual void finish() {}
};

class MemorySink final : public AnomalySink {
 public:
  void emit(const Anomaly& anomaly) override { anomalies.push_back(anomaly); }

  std::vector<Anomaly> anomalies;
};

class NullSink final : public AnomalySink {
 public:
  void emit(const Anomaly&) override {}
};

/// One formatted anomaly per line.
class FileSink final : public AnomalySink {
 public:
  explicit FileSink(const std::string& path);

  void emit(const Anomaly& anomaly) override;
  void finish() override;

 private:
  std::ofstream out_;
  std::string path_;
};

/// One formatted anomaly per line on an already open stream.
class StreamSink final : public AnomalySink {
 public:
  explicit StreamSink(std::ostream& out) : out_(out) {}

  void emit(const Anomaly& anomaly) override;
  void finish() override { out_.flush(); }

 private:
  std::ostream& out_;
};

std::string read_file(const std::string& path);

}  // namespace streamad
