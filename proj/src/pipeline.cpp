#include "streamad/pipeline.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <random>
#include <thread>
#include <tuple>

#include "streamad/wire.hpp"

namespace streamad {

bool order_before(const PendingAnomaly& a, const PendingAnomaly& b) noexcept {
  return std::tie(a.anomaly.timestamp, a.anomaly.machine_id, a.anomaly.property_id, a.group_id) <
         std::tie(b.anomaly.timestamp, b.anomaly.machine_id, b.anomaly.property_id, b.group_id);
}

void PreExitQueue::push(PendingAnomaly pending) {
  std::lock_guard lock(mu_);
  heap_.push(std::move(pending));
}

void PreExitQueue::pop_below(Timestamp bound, std::vector<PendingAnomaly>& out) {
  std::lock_guard lock(mu_);
  while (!heap_.empty() && heap_.top().anomaly.timestamp < bound) {
    out.push_back(heap_.top());
    heap_.pop();
  }
}

std::size_t PreExitQueue::size() const {
  std::lock_guard lock(mu_);
  return heap_.size();
}

std::int64_t monotonic_ns() noexcept {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

void Emitter::emit(const PendingAnomaly& pending) {
  std::lock_guard lock(mu_);
  Anomaly a = pending.anomaly;
  a.anomaly_id = next_id_++;
  sink_.emit(a);
  latency_sum_ms_ += static_cast<double>(monotonic_ns() - pending.ingest_ns) / 1e6;
}

std::uint64_t Emitter::emitted() const {
  std::lock_guard lock(mu_);
  return next_id_;
}

double Emitter::latency_sum_ms() const {
  std::lock_guard lock(mu_);
  return latency_sum_ms_;
}

std::size_t flush(PreExitQueue& queue, Timestamp bound, Emitter& emitter) {
  std::vector<PendingAnomaly> ready;
  queue.pop_below(bound, ready);
  for (const auto& p : ready) emitter.emit(p);
  return ready.size();
}

std::optional<double> RunReport::mean_latency_ms() const noexcept {
  if (anomalies == 0) return std::nullopt;
  return latency_sum_ms / static_cast<double>(anomalies);
}

double RunReport::throughput_mb_s() const noexcept {
  if (wall_ms <= 0.0) return 0.0;
  return static_cast<double>(bytes) / 1e6 / (wall_ms / 1e3);
}

std::string format_report(const RunReport& r) {
  std::string out;
  auto line = [&out](const char* key, const std::string& value) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  };
  auto fixed = [](double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return std::string(buf);
  };
  line("messages", std::to_string(r.messages));
  line("windows", std::to_string(r.windows()));
  line("inout", std::to_string(r.triggers.inout));
  line("k1", std::to_string(r.triggers.k1));
  line("lowk", std::to_string(r.triggers.lowk));
  line("full", std::to_string(r.triggers.full));
  line("sorted", std::to_string(r.triggers.sorted));
  line("anomalies", std::to_string(r.anomalies));
  line("wall_ms", fixed(r.wall_ms, 3));
  line("parse_errors", std::to_string(r.parse_errors));
  line("bytes", std::to_string(r.bytes));
  auto latency = r.mean_latency_ms();
  line("latency_ms", latency ? fixed(*latency, 3) : "n/a");
  return out;
}

// ---------------------------------------------------------------------------

namespace {

class ViewSource final : public MessageSource {
 public:
  explicit ViewSource(std::vector<std::string_view> views) : views_(std::move(views)) {}
  std::optional<std::string_view> next() override {
    if (next_ == views_.size()) return std::nullopt;
    return views_[next_++];
  }
  void rewind() override { next_ = 0; }

 private:
  std::vector<std::string_view> views_;
  std::size_t next_ = 0;
};

}  // namespace

/// State of one pass of the engine over a source.
class Engine::Run {
 public:
  Run(Engine& engine, AnomalySink& sink)
      : engine_(engine), config_(engine.config_), sink_(sink), emitter_(sink),
        watermark_(config_.worker_count) {
    for (std::uint32_t w = 0; w < config_.worker_count; ++w) {
      queues_.push_back(std::make_unique<SpscQueue<Envelope>>(config_.queue_capacity));
      workers_.emplace_back(ChainOptions::from(config_));
    }
  }

  RunReport threaded(MessageSource& source);
  RunReport scheduled(MessageSource& source, std::uint64_t seed, ScheduleTrace* trace);

 private:
  struct WorkerState {
    explicit WorkerState(ChainOptions options) : chain(options) {}
    SensorChain chain;
    TriggerCounters triggers;
    std::uint64_t parse_errors = 0;
  };

  struct Routed {
    std::uint32_t worker = 0;
    Timestamp timestamp = 0;
  };

  // Dispatcher side. Returns nullopt for a message whose header cannot be
  // read; such messages are counted and dropped.
  std::optional<Routed> route_message(std::string_view bytes) {
    ++messages_;
    bytes_ += bytes.size();
    try {
      RouteInfo info = parse_route_fast(bytes);
      clock_ = std::max(clock_, info.timestamp);
      return Routed{route(info.machine_id, config_.worker_count), clock_};
    } catch (const ParseError&) {
      ++dispatch_errors_;
      return std::nullopt;
    }
  }

  // Worker side: streamed parse, one reading at a time through the chain.
  // Returns true when at least one anomaly was produced.
  bool process(std::uint32_t worker, const Envelope& env) {
    auto& state = workers_[worker];
    auto& store = engine_.store_;
    bool produced = false;
    std::optional<Timestamp> ts;
    try {
      GroupHeader h = parse_header(env.bytes);
      ts = h.timestamp;
      if (store.has_windows(h.machine_id)) {
        ParseCursor cursor = h.cursor;
        while (auto reading = parse_next_reading(env.bytes, cursor)) {
          SensorWindow* window = store.lookup({h.machine_id, reading->property_id});
          if (window == nullptr) continue;
          ChainStep step = state.chain.push(*window, reading->value);
          if (step.window_processed) state.triggers.record(step.trigger);
          if (!step.anomaly) continue;
          PendingAnomaly pending{{0, h.machine_id, reading->property_id, h.timestamp, *step.anomaly},
                                 h.group_id,
                                 env.ingest_ns};
          if (config_.synchronized_output) {
            pre_exit_.push(pending);
          } else {
            emitter_.emit(pending);
          }
          produced = true;
        }
      }
    } catch (const ParseError&) {
      // Readings before the malformed one have already been applied.
      ++state.parse_errors;
    }
    if (ts) {
      watermark_.publish(worker, *ts);
    } else {
      watermark_.publish_unchanged(worker);
    }
    return produced;
  }

  void flush_below(Timestamp bound) { flush(pre_exit_, bound, emitter_); }

  RunReport report(double wall_ms) const {
    RunReport r;
    r.messages = messages_;
    r.bytes = bytes_;
    r.parse_errors = dispatch_errors_;
    for (const auto& w : workers_) {
      r.triggers += w.triggers;
      r.parse_errors += w.parse_errors;
    }
    r.anomalies = emitter_.emitted();
    r.latency_sum_ms = emitter_.latency_sum_ms();
    r.wall_ms = wall_ms;
    return r;
  }

  void nudge_flusher() {
    {
      std::lock_guard lock(flush_mu_);
      nudged_ = true;
    }
    flush_cv_.notify_one();
  }

  void flusher_loop();

  Engine& engine_;
  const RunConfig& config_;
  AnomalySink& sink_;
  Emitter emitter_;
  Watermark watermark_;
  PreExitQueue pre_exit_;
  std::vector<std::unique_ptr<SpscQueue<Envelope>>> queues_;
  std::vector<WorkerState> workers_;

  // Dispatcher-owned.
  std::uint64_t messages_ = 0;
  std::uint64_t bytes_ = 0;
  std::uint64_t dispatch_errors_ = 0;
  Timestamp clock_ = kTimestampMin;

  std::mutex flush_mu_;
  std::condition_variable flush_cv_;
  bool nudged_ = false;
  bool stop_ = false;
  std::exception_ptr flusher_error_;
};

void Engine::Run::flusher_loop() {
  const auto interval = std::chrono::microseconds(std::max<std::uint32_t>(1, config_.flush_interval_us));
  std::unique_lock lock(flush_mu_);
  while (!stop_) {
    flush_cv_.wait_for(lock, interval, [this] { return stop_ || nudged_; });
    nudged_ = false;
    lock.unlock();
    try {
      flush_below(watermark_.flush_bound(config_.compat_sentinel_watermark));
    } catch (...) {
      lock.lock();
      flusher_error_ = std::current_exception();
      return;
    }
    lock.lock();
  }
}

RunReport Engine::Run::threaded(MessageSource& source) {
  const std::int64_t start = monotonic_ns();
  const bool sync = config_.synchronized_output;

  std::vector<std::thread> threads;
  threads.reserve(config_.worker_count);
  for (std::uint32_t w = 0; w < config_.worker_count; ++w) {
    threads.emplace_back([this, w, sync] {
      auto& queue = *queues_[w];
      while (true) {
        Envelope env = queue.pop();
        if (env.end) break;
        if (process(w, env) && sync) nudge_flusher();
      }
    });
  }
  std::thread flusher;
  if (sync) flusher = std::thread([this] { flusher_loop(); });

  std::exception_ptr error;
  try {
    while (auto bytes = source.next()) {
      const std::int64_t ingest = monotonic_ns();
      auto routed = route_message(*bytes);
      if (!routed) continue;
      watermark_.advance_clock(routed->timestamp);
      queues_[routed->worker]->push(Envelope{*bytes, ingest, false});
      watermark_.note_enqueued(routed->worker);
    }
  } catch (...) {
    error = std::current_exception();
  }

  for (auto& q : queues_) q->push(Envelope{{}, 0, true});
  for (auto& t : threads) t.join();
  if (sync) {
    {
      std::lock_guard lock(flush_mu_);
      stop_ = true;
    }
    flush_cv_.notify_one();
    flusher.join();
    if (!error) error = flusher_error_;
  }

  if (!error) {
    try {
      if (sync) flush_below(kTimestampMax);
      sink_.finish();
    } catch (...) {
      error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return report(static_cast<double>(monotonic_ns() - start) / 1e6);
}

RunReport Engine::Run::scheduled(MessageSource& source, std::uint64_t seed, ScheduleTrace* trace) {
  const std::int64_t start = monotonic_ns();
  const std::uint32_t workers = config_.worker_count;
  const bool sync = config_.synchronized_output;

  // Dispatcher: read+clock, then enqueue as a separate step; then one
  // end-of-stream marker per worker.
  enum class DispatchPhase { kRead, kEnqueue, kEnd, kDone };
  DispatchPhase dphase = DispatchPhase::kRead;
  Envelope pending_env;
  std::uint32_t pending_worker = 0;
  std::uint32_t end_next = 0;

  // Worker: pop, then process as a separate step.
  struct WorkerSlot {
    std::optional<Envelope> held;
    bool done = false;
  };
  std::vector<WorkerSlot> slots(workers);

  // Flusher: clock read, one read per worker, then flush.
  Watermark::Snapshot snapshot(watermark_);
  std::uint32_t fphase = 0;

  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> enabled;
  enabled.reserve(workers + 2);
  const std::uint32_t dispatcher_id = 0;
  const std::uint32_t flusher_id = workers + 1;
  std::uint64_t fingerprint = 1469598103934665603ULL;
  std::uint64_t steps = 0;

  auto all_workers_done = [&] {
    return std::all_of(slots.begin(), slots.end(), [](const WorkerSlot& s) { return s.done; });
  };

  while (true) {
    enabled.clear();
    switch (dphase) {
      case DispatchPhase::kRead:
        enabled.push_back(dispatcher_id);
        break;
      case DispatchPhase::kEnqueue:
        if (queues_[pending_worker]->size_hint() < queues_[pending_worker]->capacity()) {
          enabled.push_back(dispatcher_id);
        }
        break;
      case DispatchPhase::kEnd:
        if (queues_[end_next]->size_hint() < queues_[end_next]->capacity()) {
          enabled.push_back(dispatcher_id);
        }
        break;
      case DispatchPhase::kDone:
        break;
    }
    for (std::uint32_t w = 0; w < workers; ++w) {
      if (!slots[w].done && (slots[w].held || !queues_[w]->empty())) enabled.push_back(w + 1);
    }
    const bool finishing = dphase == DispatchPhase::kDone && all_workers_done();
    if (sync && !finishing) enabled.push_back(flusher_id);
    if (enabled.empty()) break;

    std::uint32_t actor = enabled[rng() % enabled.size()];
    fingerprint = (fingerprint ^ actor) * 1099511628211ULL;
    ++steps;

    if (actor == dispatcher_id) {
      if (dphase == DispatchPhase::kRead) {
        auto bytes = source.next();
        if (!bytes) {
          dphase = DispatchPhase::kEnd;
          continue;
        }
        auto routed = route_message(*bytes);
        if (!routed) continue;
        watermark_.advance_clock(routed->timestamp);
        pending_env = Envelope{*bytes, monotonic_ns(), false};
        pending_worker = routed->worker;
        dphase = DispatchPhase::kEnqueue;
      } else if (dphase == DispatchPhase::kEnqueue) {
        queues_[pending_worker]->try_push(pending_env);
        watermark_.note_enqueued(pending_worker);
        dphase = DispatchPhase::kRead;
      } else {
        queues_[end_next]->try_push(Envelope{{}, 0, true});
        if (++end_next == workers) dphase = DispatchPhase::kDone;
      }
    } else if (actor == flusher_id) {
      if (fphase == 0) {
        snapshot.read_clock();
      } else if (fphase <= workers) {
        snapshot.read_worker(fphase - 1);
      } else {
        flush_below(snapshot.bound(config_.compat_sentinel_watermark));
      }
      fphase = fphase == workers + 1 ? 0 : fphase + 1;
    } else {
      auto& slot = slots[actor - 1];
      if (!slot.held) {
        Envelope env;
        queues_[actor - 1]->try_pop(env);
        if (env.end) {
          slot.done = true;
        } else {
          slot.held = env;
        }
      } else {
        process(actor - 1, *slot.held);
        slot.held.reset();
      }
    }
  }

  if (sync) flush_below(kTimestampMax);
  sink_.finish();
  if (trace != nullptr) {
    trace->steps = steps;
    trace->fingerprint = fingerprint;
  }
  return report(static_cast<double>(monotonic_ns() - start) / 1e6);
}

// ---------------------------------------------------------------------------

Engine::Engine(MetadataMap metadata, const RunConfig& config)
    : metadata_(std::move(metadata)),
      config_(validate_config(config)),
      store_(metadata_, config_.window_size, config_.sorted_sweep) {}

RunReport Engine::run(MessageSource& source, AnomalySink& sink) {
  Run run(*this, sink);
  return run.threaded(source);
}

RunReport Engine::run_scheduled(MessageSource& source, AnomalySink& sink, std::uint64_t seed,
                                ScheduleTrace* trace) {
  Run run(*this, sink);
  return run.scheduled(source, seed, trace);
}

void Engine::warmup(MessageSource& source, std::uint32_t groups, std::uint32_t passes) {
  if (groups == 0 || passes == 0) return;
  std::vector<std::string_view> prefix;
  prefix.reserve(groups);
  while (prefix.size() < groups) {
    auto bytes = source.next();
    if (!bytes) break;
    prefix.push_back(*bytes);
  }
  source.rewind();
  for (std::uint32_t p = 0; p < passes; ++p) {
    reset();
    ViewSource views(prefix);
    NullSink discard;
    Run run(*this, discard);
    run.threaded(views);
  }
  reset();
}

void Engine::reset() { store_.reset(); }

bool Engine::pristine() const { return store_.pristine(); }

}  // namespace streamad
