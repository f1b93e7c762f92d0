#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "latcirc/error.hpp"
#include "latcirc/signature.hpp"
#include "text_util.hpp"

namespace latcirc::detail {

inline std::string tuple_text(const Interpretation& I, std::span<const Elem> t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += I.symbol_of(t[i]);
  }
  return s + ")";
}

inline Tuple parse_tuple(const std::string& text, const Interpretation& I, std::size_t width,
                  std::size_t line_no) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '(' || t.back() != ')')
    throw Error(ErrorCode::SyntaxError,
                "line " + std::to_string(line_no) + ": expected a parenthesised tuple, got '" + t + "'");
  Tuple out;
  std::string inner = trim(std::string_view(t).substr(1, t.size() - 2));
  if (!inner.empty())
    for (auto& part : split(inner, ',')) {
      auto e = I.element_of(trim(part));
      if (!e)
        throw Error(ErrorCode::UnknownValue,
                    "line " + std::to_string(line_no) + ": unknown value '" + trim(part) + "'");
      out.push_back(*e);
    }
  if (out.size() != width)
    throw Error(ErrorCode::WidthMismatch, "line " + std::to_string(line_no) + ": tuple " + t +
                                              " should have " + std::to_string(width) + " entries");
  return out;
}

// `kind k1=v1 k2=v2`
inline std::map<std::string, std::size_t> parse_header(const std::string& line, const std::string& kind) {
  std::istringstream in(line);
  std::string word;
  in >> word;
  if (word != kind) throw Error(ErrorCode::SyntaxError, "expected header '" + kind + " ...'");
  std::map<std::string, std::size_t> out;
  while (in >> word) {
    auto eq = word.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::SyntaxError, "bad header field '" + word + "'");
    try {
      out[word.substr(0, eq)] = std::stoul(word.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::SyntaxError, "bad header field '" + word + "'");
    }
  }
  return out;
}

inline std::vector<std::pair<std::size_t, std::string>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string>> out;
  std::size_t no = 0;
  for (const auto& raw : split_lines(text)) {
    ++no;
    std::string l = trim(strip_comment(raw));
    if (!l.empty()) out.emplace_back(no, l);
  }
  return out;
}

}  // namespace latcirc::detail
