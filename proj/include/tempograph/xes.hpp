// Copyright 2026 The tempograph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <zlib.h>

#include <array>
#include <fstream>
#include <istream>
#include <memory>
#include <streambuf>
#include <string>
#include <unordered_set>
#include <vector>

#include "tempograph/event.hpp"
#include "tempograph/xml.hpp"

namespace tempograph {

struct XesResult {
  EventLog log;
  std::vector<std::string> warnings;
};

namespace detail {

// Element names XES uses for typed attributes.
inline bool is_xes_attribute(const std::string& tag) {
  return tag == "string" || tag == "date" || tag == "int" || tag == "float" || tag == "boolean" ||
         tag == "id" || tag == "list" || tag == "container";
}

/// std::streambuf over a gzip file; also reads uncompressed files unchanged.
class GzStreamBuf : public std::streambuf {
 public:
  explicit GzStreamBuf(const std::string& path) : file_(gzopen(path.c_str(), "rb")) {
    if (file_) gzbuffer(file_, 1 << 17);
  }
  ~GzStreamBuf() override {
    if (file_) gzclose(file_);
  }
  GzStreamBuf(const GzStreamBuf&) = delete;
  GzStreamBuf& operator=(const GzStreamBuf&) = delete;

  bool is_open() const noexcept { return file_ != nullptr; }

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    int n = gzread(file_, buf_.data(), static_cast<unsigned>(buf_.size()));
    if (n <= 0) return traits_type::eof();
    setg(buf_.data(), buf_.data(), buf_.data() + n);
    return traits_type::to_int_type(*gptr());
  }

 private:
  gzFile file_;
  std::array<char, 1 << 16> buf_{};
};

}  // namespace detail

/// Parses an XES document. Reads concept:name, time:timestamp and
/// lifecycle:transition; other top-level event attributes land in attrs.
/// Events without a timestamp (or without a name) are dropped with a
/// warning. Malformed XML throws ParseError.
inline XesResult parse_xes(std::istream& in) {
  XesResult result;
  xml::Reader reader(in);

  struct PendingEvent {
    Event event;
    bool has_time = false;
    std::size_t line = 0;
  };

  std::unordered_set<std::string> seen_ids;
  Trace trace;
  bool in_trace = false;
  bool trace_named = false;
  std::size_t trace_ordinal = 0;
  std::unique_ptr<PendingEvent> pending;
  // Depth of the element that owns the attributes we are collecting.
  std::size_t owner_depth = 0;
  // Depth of a nested/ignored subtree (global, extension, nested attributes).
  std::size_t skip_depth = 0;
  bool saw_log = false;

  auto finish_trace = [&] {
    ++trace_ordinal;
    if (!trace_named) {
      trace.trace_id = "trace-" + std::to_string(trace_ordinal);
      result.warnings.push_back("trace #" + std::to_string(trace_ordinal) +
                                " has no concept:name; assigned id " + trace.trace_id);
    }
    if (!seen_ids.insert(trace.trace_id).second) {
      std::string fresh = trace.trace_id + "#" + std::to_string(trace_ordinal);
      result.warnings.push_back("duplicate trace id " + trace.trace_id + "; renamed to " + fresh);
      trace.trace_id = fresh;
    }
    for (auto& e : trace.events) e.trace_id = trace.trace_id;
    trace.sort_events();
    result.log.traces.push_back(std::move(trace));
    trace = Trace{};
  };

  for (;;) {
    auto tok = reader.next();
    if (tok == xml::Reader::Token::End) break;
    const std::string& tag = reader.name();

    if (tok == xml::Reader::Token::StartElement) {
      std::size_t depth = reader.depth();
      if (skip_depth) continue;
      if (depth == 1) {
        if (tag != "log") reader.fail("root element must be <log>, found <" + tag + ">");
        saw_log = true;
        continue;
      }
      if (tag == "trace" && depth == 2) {
        in_trace = true;
        trace_named = false;
        owner_depth = depth;
        continue;
      }
      if (tag == "event" && in_trace && depth == 3) {
        pending = std::make_unique<PendingEvent>();
        pending->event.lifecycle = Lifecycle::other("");
        pending->line = reader.line();
        owner_depth = depth;
        continue;
      }
      if (detail::is_xes_attribute(tag) && depth == owner_depth + 1 && (pending || in_trace)) {
        const std::string* key = reader.attribute("key");
        const std::string* value = reader.attribute("value");
        // Nested attribute children are not interpreted.
        skip_depth = depth;
        if (!key) continue;
        std::string v = value ? *value : std::string();
        if (pending) {
          auto& ev = pending->event;
          if (*key == "concept:name") {
            ev.activity = v;
          } else if (*key == "time:timestamp") {
            auto ts = parse_timestamp(v);
            if (!ts) {
              result.warnings.push_back("line " + std::to_string(reader.line()) +
                                        ": unparseable time:timestamp '" + v + "'");
            } else {
              ev.timestamp = *ts;
              pending->has_time = true;
            }
          } else if (*key == "lifecycle:transition") {
            ev.lifecycle = Lifecycle::parse(v);
          } else {
            ev.attrs[*key] = v;
          }
        } else if (*key == "concept:name") {
          trace.trace_id = v;
          trace_named = true;
        }
        continue;
      }
      // global, extension, classifier, log-level attributes, event outside trace...
      skip_depth = depth;
      continue;
    }

    // EndElement
    std::size_t depth_after = reader.depth();
    if (skip_depth) {
      if (depth_after + 1 == skip_depth) skip_depth = 0;
      continue;
    }
    if (tag == "event" && pending) {
      if (!pending->has_time) {
        result.warnings.push_back("line " + std::to_string(pending->line) +
                                  ": event without time:timestamp dropped");
      } else if (pending->event.activity.empty()) {
        result.warnings.push_back("line " + std::to_string(pending->line) +
                                  ": event without concept:name dropped");
      } else {
        trace.events.push_back(std::move(pending->event));
      }
      pending.reset();
      owner_depth = 2;
    } else if (tag == "trace" && in_trace) {
      finish_trace();
      in_trace = false;
      owner_depth = 0;
    }
  }
  if (!saw_log) throw ParseError("XES: no <log> element", 0);
  return result;
}

/// Opens `path` (plain or gzip-compressed XES) and parses it.
inline XesResult parse_xes_file(const std::string& path) {
  detail::GzStreamBuf buf(path);
  if (!buf.is_open()) throw Error("cannot open " + path);
  std::istream in(&buf);
  auto result = parse_xes(in);
  result.log.source = path;
  return result;
}

}  // namespace tempograph
