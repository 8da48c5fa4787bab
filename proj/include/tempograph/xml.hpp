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

// Minimal pull-style XML reader. Enough for XES: elements and attributes,
// with comments, processing instructions, DOCTYPE, CDATA and character data
// skipped. Element nesting is checked; errors carry the line number.

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tempograph/event.hpp"

namespace tempograph::xml {

class Reader {
 public:
  enum class Token { StartElement, EndElement, End };
  using Attribute = std::pair<std::string, std::string>;

  explicit Reader(std::istream& in) : in_(in) {}

  /// Advances to the next element boundary. A self-closing element yields a
  /// StartElement followed by an EndElement.
  Token next() {
    if (pending_end_) {
      pending_end_ = false;
      name_ = stack_.back();
      stack_.pop_back();
      return Token::EndElement;
    }
    for (;;) {
      int c = get();
      if (c < 0) {
        if (!stack_.empty()) fail("unexpected end of input inside <" + stack_.back() + ">");
        if (!seen_root_) fail("no root element");
        return Token::End;
      }
      if (c != '<') {
        if (stack_.empty() && !is_space(c)) fail("character data outside the root element");
        continue;
      }
      int d = peek();
      if (d == '?') {
        skip_until("?>");
      } else if (d == '!') {
        get();
        if (starts_with("--")) {
          skip_until("-->");
        } else if (starts_with("[CDATA[")) {
          skip_until("]]>");
        } else {
          skip_declaration();
        }
      } else if (d == '/') {
        get();
        read_name(name_);
        skip_space();
        expect('>');
        if (stack_.empty() || stack_.back() != name_) {
          fail("mismatched closing tag </" + name_ + ">" +
               (stack_.empty() ? std::string() : ", expected </" + stack_.back() + ">"));
        }
        stack_.pop_back();
        return Token::EndElement;
      } else {
        if (stack_.empty() && seen_root_) fail("more than one root element");
        read_start_tag();
        seen_root_ = true;
        return Token::StartElement;
      }
    }
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<Attribute>& attributes() const noexcept { return attrs_; }

  /// Value of attribute `key` on the current start element, or nullptr.
  const std::string* attribute(std::string_view key) const {
    for (const auto& [k, v] : attrs_)
      if (k == key) return &v;
    return nullptr;
  }

  std::size_t depth() const noexcept { return stack_.size(); }
  std::size_t line() const noexcept { return line_; }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError("XML: " + what, line_); }

 private:
  static bool is_space(int c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
  static bool is_name_char(int c) {
    return c > 0x7f || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == ':' || c == '_' || c == '-' || c == '.';
  }

  bool fill() {
    if (!in_) return false;
    in_.read(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    len_ = static_cast<std::size_t>(in_.gcount());
    pos_ = 0;
    return len_ > 0;
  }

  int peek() {
    if (pos_ == len_ && !fill()) return -1;
    return static_cast<unsigned char>(buf_[pos_]);
  }

  int get() {
    int c = peek();
    if (c >= 0) {
      ++pos_;
      if (c == '\n') ++line_;
    }
    return c;
  }

  void expect(char want) {
    int c = get();
    if (c != want) {
      fail(std::string("expected '") + want + "' but found " +
           (c < 0 ? std::string("end of input") : "'" + std::string(1, static_cast<char>(c)) + "'"));
    }
  }

  void skip_space() {
    while (is_space(peek())) get();
  }

  /// Consumes `lit` if the input continues with it. Partial matches are a
  /// syntax error because the callers only probe after "<!".
  bool starts_with(std::string_view lit) {
    if (peek() != static_cast<unsigned char>(lit.front())) return false;
    for (char ch : lit) {
      if (get() != static_cast<unsigned char>(ch)) fail("malformed markup declaration");
    }
    return true;
  }

  void skip_until(std::string_view terminator) {
    std::size_t matched = 0;
    for (;;) {
      int c = get();
      if (c < 0) fail("unterminated construct, expected '" + std::string(terminator) + "'");
      if (c == static_cast<unsigned char>(terminator[matched])) {
        if (++matched == terminator.size()) return;
      } else {
        matched = (c == static_cast<unsigned char>(terminator[0])) ? 1 : 0;
      }
    }
  }

  // <!DOCTYPE ...> possibly with an internal subset in brackets.
  void skip_declaration() {
    int brackets = 0;
    for (;;) {
      int c = get();
      if (c < 0) fail("unterminated declaration");
      if (c == '[') ++brackets;
      if (c == ']') --brackets;
      if (c == '>' && brackets <= 0) return;
    }
  }

  void read_name(std::string& out) {
    out.clear();
    while (is_name_char(peek())) out.push_back(static_cast<char>(get()));
    if (out.empty()) fail("expected a name");
  }

  void read_start_tag() {
    read_name(name_);
    attrs_.clear();
    for (;;) {
      skip_space();
      int c = peek();
      if (c == '/') {
        get();
        expect('>');
        stack_.push_back(name_);
        pending_end_ = true;
        return;
      }
      if (c == '>') {
        get();
        stack_.push_back(name_);
        return;
      }
      if (c < 0) fail("unterminated start tag <" + name_ + ">");
      Attribute attr;
      read_name(attr.first);
      skip_space();
      expect('=');
      skip_space();
      int q = get();
      if (q != '"' && q != '\'') fail("attribute value must be quoted");
      for (;;) {
        int ch = get();
        if (ch < 0) fail("unterminated attribute value");
        if (ch == q) break;
        if (ch == '<') fail("'<' in attribute value");
        if (ch == '&') {
          read_entity(attr.second);
        } else {
          attr.second.push_back(static_cast<char>(ch));
        }
      }
      attrs_.push_back(std::move(attr));
    }
  }

  static void append_utf8(std::string& out, std::uint32_t cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  void read_entity(std::string& out) {
    std::string ent;
    for (;;) {
      int c = get();
      if (c < 0 || ent.size() > 10) fail("unterminated entity reference");
      if (c == ';') break;
      ent.push_back(static_cast<char>(c));
    }
    if (ent == "lt") out.push_back('<');
    else if (ent == "gt") out.push_back('>');
    else if (ent == "amp") out.push_back('&');
    else if (ent == "quot") out.push_back('"');
    else if (ent == "apos") out.push_back('\'');
    else if (ent.size() > 1 && ent[0] == '#') {
      std::uint32_t cp = 0;
      bool hex = ent[1] == 'x' || ent[1] == 'X';
      std::size_t i = hex ? 2 : 1;
      if (i >= ent.size()) fail("bad character reference &" + ent + ";");
      for (; i < ent.size(); ++i) {
        char ch = ent[i];
        int v;
        if (ch >= '0' && ch <= '9') v = ch - '0';
        else if (hex && ch >= 'a' && ch <= 'f') v = ch - 'a' + 10;
        else if (hex && ch >= 'A' && ch <= 'F') v = ch - 'A' + 10;
        else fail("bad character reference &" + ent + ";");
        cp = cp * (hex ? 16 : 10) + static_cast<std::uint32_t>(v);
        if (cp > 0x10FFFF) fail("character reference out of range");
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity &" + ent + ";");
    }
  }

  std::istream& in_;
  std::array<char, 1 << 16> buf_{};
  std::size_t pos_ = 0;
  std::size_t len_ = 0;
  std::size_t line_ = 1;

  std::string name_;
  std::vector<Attribute> attrs_;
  std::vector<std::string> stack_;
  bool pending_end_ = false;
  bool seen_root_ = false;
};

}  // namespace tempograph::xml
