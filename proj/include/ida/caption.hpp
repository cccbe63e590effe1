#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ida/identity.hpp"

namespace ida {

inline constexpr const char* kIdentifierWord = "sks";
inline constexpr int kMaxTokens = 16;

inline bool is_class_noun(const std::string& s) {
  return s == "man" || s == "woman" || s == "person";
}

// "<style> of <class_noun> in <context>, <expression>. <class_noun> is sks"
inline std::string make_caption(const SceneParams& scene, const std::string& class_noun) {
  if (!is_class_noun(class_noun))
    throw std::invalid_argument("unknown class noun: " + class_noun);
  std::ostringstream os;
  os << to_string(scene.style) << " of " << class_noun << " in " << to_string(scene.context)
     << ", " << to_string(scene.expression) << ". " << class_noun << " is " << kIdentifierWord;
  return os.str();
}

struct ParsedCaption {
  Style style;
  Context context;
  Expression expression;
  std::string class_noun;
};

// Inverse of make_caption for the categorical fields it encodes.
inline ParsedCaption parse_caption(const std::string& caption) {
  std::istringstream is(caption);
  std::string style_w, of_w, noun1, in_w, context_w, expr_w, noun2, is_w, sks_w;
  is >> style_w >> of_w >> noun1 >> in_w >> context_w >> expr_w >> noun2 >> is_w >> sks_w;
  auto strip = [](std::string s) {
    while (!s.empty() && (s.back() == ',' || s.back() == '.')) s.pop_back();
    return s;
  };
  context_w = strip(context_w);
  expr_w = strip(expr_w);
  if (of_w != "of" || in_w != "in" || is_w != "is" || sks_w != kIdentifierWord || noun1 != noun2 ||
      !is_class_noun(noun1))
    throw std::invalid_argument("caption does not match grammar: " + caption);
  ParsedCaption p;
  p.style = category_from_string<Style>(style_w);
  p.context = category_from_string<Context>(context_w);
  p.expression = category_from_string<Expression>(expr_w);
  p.class_noun = noun1;
  return p;
}

// Word-level tokenizer over the closed caption vocabulary.
class Tokenizer {
 public:
  Tokenizer() {
    add("[pad]");
    for (int i = 0; i < 4; ++i) add(to_string(static_cast<Style>(i)));
    for (int i = 0; i < 4; ++i) add(to_string(static_cast<Context>(i)));
    for (int i = 0; i < 4; ++i) add(to_string(static_cast<Expression>(i)));
    add("man"); add("woman"); add("person");
    add("of"); add("in"); add("is");
    add(","); add(".");
    add(kIdentifierWord);
  }

  int vocab_size() const { return static_cast<int>(words_.size()); }
  int pad_id() const { return 0; }
  int sks_id() const { return id(kIdentifierWord); }

  int id(const std::string& w) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] == w) return static_cast<int>(i);
    throw std::invalid_argument("word not in vocabulary: " + w);
  }

  const std::string& word(int id) const { return words_.at(static_cast<std::size_t>(id)); }

  // Splits on whitespace; trailing , and . become their own tokens.
  // Output is padded/truncated to kMaxTokens.
  std::vector<int> encode(const std::string& text) const {
    std::vector<int> ids;
    std::istringstream is(text);
    std::string w;
    while (is >> w) {
      std::vector<std::string> tail;
      while (!w.empty() && (w.back() == ',' || w.back() == '.')) {
        tail.insert(tail.begin(), std::string(1, w.back()));
        w.pop_back();
      }
      if (!w.empty()) ids.push_back(id(w));
      for (const auto& t : tail) ids.push_back(id(t));
    }
    if (static_cast<int>(ids.size()) > kMaxTokens) ids.resize(kMaxTokens);
    while (static_cast<int>(ids.size()) < kMaxTokens) ids.push_back(pad_id());
    return ids;
  }

  // All positions holding the identifier token.
  std::vector<int> identifier_positions(const std::vector<int>& ids) const {
    std::vector<int> pos;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == sks_id()) pos.push_back(static_cast<int>(i));
    return pos;
  }

 private:
  void add(const std::string& w) { words_.push_back(w); }
  std::vector<std::string> words_;
};

inline const Tokenizer& tokenizer() {
  static const Tokenizer tk;
  return tk;
}

}  // namespace ida
