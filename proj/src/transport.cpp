#include "streamad/transport.hpp"

#include <sstream>
#include <stdexcept>

#include "streamad/wire.hpp"

namespace streamad {

std::optional<std::string_view> MemorySource::next() {
  if (next_ == messages_.size()) return std::nullopt;
  return std::string_view(messages_[next_++]);
}

CorpusSource::CorpusSource(std::string corpus)
    : corpus_(std::make_unique<std::string>(std::move(corpus))),
      messages_(split_messages(*corpus_)) {}

CorpusSource CorpusSource::from_file(const std::string& path) { return CorpusSource(read_file(path)); }

std::optional<std::string_view> CorpusSource::next() {
  if (next_ == messages_.size()) return std::nullopt;
  return messages_[next_++];
}

FileSink::FileSink(const std::string& path) : out_(path, std::ios::binary | std::ios::trunc), path_(path) {
  if (!out_) throw std::runtime_error("cannot open output file " + path);
}

void FileSink::emit(const Anomaly& anomaly) {
  out_ << format_anomaly(anomaly) << '\n';
}

void FileSink::finish() {
  out_.flush();
  if (!out_) throw std::runtime_error("failed writing output file " + path_);
}

void StreamSink::emit(const Anomaly& anomaly) { out_ << format_anomaly(anomaly) << '\n'; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open input file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace streamad
