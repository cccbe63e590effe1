#include <doctest.h>

#include "ida/caption.hpp"

using namespace ida;

TEST_SUITE("caption") {

TEST_CASE("template fill matches the grammar exactly") {
  SceneParams s;
  s.style = Style::kPhoto;
  s.context = Context::kPlain;
  s.expression = Expression::kHappy;
  CHECK(make_caption(s, "man") == "photo of man in plain, happy. man is sks");
}

TEST_CASE("unknown class noun rejected") {
  CHECK_THROWS(make_caption(SceneParams{}, "robot"));
}

TEST_CASE("every caption contains exactly one identifier token") {
  const auto& tk = tokenizer();
  for (int st = 0; st < 4; ++st)
    for (int ctx = 0; ctx < 4; ++ctx)
      for (int ex = 0; ex < 4; ++ex) {
        SceneParams s;
        s.style = static_cast<Style>(st);
        s.context = static_cast<Context>(ctx);
        s.expression = static_cast<Expression>(ex);
        auto ids = tk.encode(make_caption(s, "woman"));
        CHECK(tk.identifier_positions(ids).size() == 1);
      }
}

TEST_CASE("full grid round-trips through the inverse grammar") {
  for (int st = 0; st < 4; ++st)
    for (int ctx = 0; ctx < 4; ++ctx)
      for (int ex = 0; ex < 4; ++ex)
        for (const char* noun : {"man", "woman", "person"}) {
          SceneParams s;
          s.style = static_cast<Style>(st);
          s.context = static_cast<Context>(ctx);
          s.expression = static_cast<Expression>(ex);
          ParsedCaption p = parse_caption(make_caption(s, noun));
          CHECK(p.style == s.style);
          CHECK(p.context == s.context);
          CHECK(p.expression == s.expression);
          CHECK(p.class_noun == noun);
        }
}

TEST_CASE("tokenizer separates punctuation and pads") {
  const auto& tk = tokenizer();
  auto ids = tk.encode("photo of man in plain, happy. man is sks");
  CHECK(ids.size() == kMaxTokens);
  CHECK(tk.word(static_cast<std::size_t>(ids[4])) == "plain");
  CHECK(tk.word(static_cast<std::size_t>(ids[5])) == ",");
  CHECK(tk.word(static_cast<std::size_t>(ids[7])) == ".");
  CHECK(ids.back() == tk.pad_id());
  CHECK_THROWS(tk.encode("photo of alien"));
}

}  // TEST_SUITE
