#include "salesgen/mock_backends.hpp"

#include <fstream>

#include "salesgen/hashing.hpp"
#include "salesgen/text_norm.hpp"

namespace salesgen {

MockChatBackend::MockChatBackend(std::string name, std::vector<std::string> bank)
    : name_(std::move(name)), bank_(std::move(bank)) {
  if (bank_.empty()) throw std::invalid_argument("mock chat bank must be non-empty");
}

const std::vector<std::string>& MockChatBackend::chitchat_bank() {
  static const std::vector<std::string> bank = {
      // Intent-bearing lines; the substrings below are keyed by the default
      // QA script.
      "I like playing video games as well. I also like to go to the movies.",
      "We could check the showtimes for the new releases this weekend.",
      "I would love to see all of the museums and historical sights someday.",
      "I listen to a lot of rap and hip hop. Do you have a favorite rapper?",
      "Could you put on some music? I love background tunes while I chat.",
      "There is a song stuck in my head but I cannot remember its name.",
      // Plain chit-chat.
      "Hi! How are you doing today?",
      "I'm doing great, thanks for asking. How about you?",
      "I spent the weekend hiking with my dog.",
      "That sounds lovely. The weather has been great lately.",
      "I work as a teacher, so my evenings are usually busy.",
      "Do you have any plans for the holidays?",
      "I've been learning to cook Italian food.",
      "My garden is finally blooming this spring.",
      "I just finished a really good book about space exploration.",
      "Traveling is my passion. I visited three countries last year.",
      "I have two cats and they run the house.",
      "Coffee or tea? I can never decide in the morning.",
      "I used to play soccer in college.",
      "Winter is my favorite season, I love skiing.",
      "My brother is visiting next week, I should plan something.",
      "I volunteer at the animal shelter on Saturdays.",
      "What do you like to do in your free time?",
      "Lately I have been really into photography.",
  };
  return bank;
}

const std::vector<std::string>& MockChatBackend::tod_user_bank() {
  static const std::vector<std::string> bank = {
      "I'm looking for a movie to watch. A regular showing would be fine.",
      "Can you find songs from the album Camila?",
      "I would like attractions in San Francisco.",
      "That sounds good. Can you tell me more about it?",
      "Is there anything else available?",
      "Yes, that's right.",
      "What is the genre of the song?",
      "I prefer the evening showing with subtitles.",
      "No, that is all. Thank you for your time.",
      "Sounds perfect. Let's do that.",
      "Actually, I would prefer a different one.",
      "Great, please book it for me.",
  };
  return bank;
}

const std::vector<std::string>& MockChatBackend::tod_sales_bank() {
  static const std::vector<std::string> bank = {
      "I found [count] options. What about [title]?",
      "What about the song [song_name] from the album [album] by [artist]?",
      "In which city do you want to search?",
      "You want to play [song_name] on your [playback_device]?",
      "Playing [title] with [subtitle_language] subtitles: do you confirm?",
      "I found [count] attractions, for example [attraction_name], a [category].",
      "Is there anything else I can help you with?",
      "Sure, when would you like to go?",
      "The [attraction_name] is free to enter and good for kids.",
      "Enjoy! Have a wonderful day. Bye!",
      "Glad I could help. <END>",
      "Would you like me to confirm the booking?",
  };
  return bank;
}

MockChatBackend MockChatBackend::chitchat() {
  return MockChatBackend("mock-chitchat", chitchat_bank());
}
MockChatBackend MockChatBackend::tod_user() {
  return MockChatBackend("mock-tod-user", tod_user_bank());
}
MockChatBackend MockChatBackend::tod_sales() {
  return MockChatBackend("mock-tod-sales", tod_sales_bank());
}

std::string MockChatBackend::chat_reply(std::span<const Turn> context,
                                        std::span<const std::string> persona,
                                        const DecodingConfig& config) const {
  if (context.empty() && persona.empty()) {
    throw std::invalid_argument("chat_reply requires context or persona");
  }
  config.check();
  // Seeded hash of (persona, last two utterances, seed) selects from the bank.
  std::uint64_t h = mix64(static_cast<std::uint64_t>(config.seed));
  for (const std::string& line : persona) h = fnv1a64(line, h ^ kFnvPrime);
  const std::size_t start = context.size() > 2 ? context.size() - 2 : 0;
  for (std::size_t i = start; i < context.size(); ++i) {
    h = fnv1a64(context[i].text, h ^ mix64(i));
  }
  h = hash_combine(h, context.size());
  return bank_[mix64(h) % bank_.size()];
}

MockQaBackend::MockQaBackend(std::vector<QaScriptEntry> script)
    : script_(std::move(script)) {}

const std::vector<QaScriptEntry>& MockQaBackend::default_script() {
  static const std::vector<QaScriptEntry> script = {
      {"go to the movies", "finding movies", QALabel::Yes, 0.9},
      {"showtimes", "getting the time for movies", QALabel::Yes, 0.85},
      {"museums and historical sights", "finding attractions", QALabel::Yes, 0.8},
      {"favorite rapper", "looking up music", QALabel::Yes, 0.75},
      {"put on some music", "playing songs", QALabel::Yes, 0.7},
      {"song stuck in my head", "looking up songs", QALabel::Yes, 0.65},
  };
  return script;
}

MockQaBackend MockQaBackend::with_default_script() {
  return MockQaBackend(default_script());
}

QAAnswer MockQaBackend::answer_question(const std::string& context_text,
                                        const std::string& question) const {
  if (context_text.empty()) throw std::invalid_argument("context must be non-empty");
  if (question.empty()) throw std::invalid_argument("question must be non-empty");
  for (const QaScriptEntry& entry : script_) {
    if (context_text.find(entry.context_substring) != std::string::npos &&
        question.find(entry.question_substring) != std::string::npos) {
      return {entry.label, entry.confidence};
    }
  }
  return {QALabel::No, 0.5};
}

namespace {

// Rewrite family for the paraphrase mock: a synonym swap, a clause
// reordering, a tag question and a politeness prefix, extended by wrapping
// when more variants are requested than base rewrites exist.
std::string rewrite_variant(const std::string& question, int variant) {
  std::string body = question;
  if (!body.empty() && body.back() == '?') body.pop_back();
  switch (variant) {
    case 0: {
      std::string out = question;
      const std::string from = "asking about";
      auto pos = out.find(from);
      if (pos != std::string::npos) out.replace(pos, from.size(), "inquiring about");
      else out = "Put differently: " + question;
      return out;
    }
    case 1:
      return body + " at the moment?";
    case 2: {
      // Clause reordering around "about".
      auto pos = question.find(" about ");
      if (pos != std::string::npos) {
        std::string tail = question.substr(pos + 7);
        if (!tail.empty() && tail.back() == '?') tail.pop_back();
        return "Regarding " + tail + ": " + to_lower(question.substr(0, 1)) +
               question.substr(1, pos - 1) + "?";
      }
      return "To rephrase, " + to_lower(question.substr(0, 1)) + question.substr(1);
    }
    case 3:
      return "Would you say the following holds: " + body + "?";
    default:
      return "Tell me, " + to_lower(question.substr(0, 1)) + question.substr(1);
  }
}

}  // namespace

std::vector<std::string> MockParaphraseBackend::paraphrase(const std::string& question,
                                                           int n) const {
  if (question.empty()) throw std::invalid_argument("question must be non-empty");
  if (n <= 0) throw std::invalid_argument("paraphrase count must be positive");
  constexpr int kBaseVariants = 5;
  std::vector<std::string> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::string variant = rewrite_variant(question, i % kBaseVariants);
    for (int wrap = 0; wrap < i / kBaseVariants; ++wrap) {
      variant = "Once more: " + variant;
    }
    out.push_back(std::move(variant));
  }
  return out;
}

MockSeq2SeqBackend::MockSeq2SeqBackend()
    : bank_{
          "Are you interested in checking that out?",
          "Speaking of which, would you like some recommendations?",
          "I could help with that. Want me to look it up?",
          "That reminds me, shall I find some options for you?",
          "Sounds fun! Do you want me to take a look?",
          "I know a few good options. Want to hear them?",
      } {}

MockSeq2SeqBackend::MockSeq2SeqBackend(std::vector<std::string> bank)
    : bank_(std::move(bank)) {
  if (bank_.empty()) throw std::invalid_argument("mock seq2seq bank must be non-empty");
}

std::string MockSeq2SeqBackend::generate(const std::string& source,
                                         const DecodingConfig& config) const {
  if (source.empty()) throw std::invalid_argument("source must be non-empty");
  config.check();
  const std::uint64_t h =
      hash_combine(fnv1a64(source), static_cast<std::uint64_t>(config.seed));
  return bank_[h % bank_.size()];
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!normalize_whitespace(line).empty()) lines.push_back(line);
  }
  return lines;
}

bool file_exists(const std::string& path) {
  return std::ifstream(path).good();
}

}  // namespace

std::unique_ptr<ChatBackend> make_mock_chat(const BackendDescriptor& desc) {
  const std::string& script = desc.mock_script;
  if (script.empty() || script == "chitchat") {
    return std::make_unique<MockChatBackend>(MockChatBackend::chitchat());
  }
  if (script == "tod_user") {
    return std::make_unique<MockChatBackend>(MockChatBackend::tod_user());
  }
  if (script == "tod_sales") {
    return std::make_unique<MockChatBackend>(MockChatBackend::tod_sales());
  }
  if (file_exists(script)) {
    auto bank = read_lines(script);
    if (bank.empty()) throw std::invalid_argument("mock script file is empty: " + script);
    return std::make_unique<MockChatBackend>(desc.name.empty() ? "mock-chat" : desc.name,
                                             std::move(bank));
  }
  throw std::invalid_argument("unknown chat mock script: " + script);
}

std::unique_ptr<QaBackend> make_mock_qa(const BackendDescriptor& desc) {
  const std::string& script = desc.mock_script;
  if (script.empty() || script == "default") {
    return std::make_unique<MockQaBackend>(MockQaBackend::with_default_script());
  }
  if (file_exists(script)) {
    // One entry per line: context_substring \t question_substring \t yes|no \t confidence
    std::vector<QaScriptEntry> entries;
    for (const std::string& line : read_lines(script)) {
      std::vector<std::string> parts;
      std::size_t start = 0;
      while (true) {
        auto tab = line.find('\t', start);
        parts.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
        if (tab == std::string::npos) break;
        start = tab + 1;
      }
      if (parts.size() != 4) {
        throw std::invalid_argument("bad qa script line (want 4 tab-separated fields): " + line);
      }
      entries.push_back({parts[0], parts[1],
                         to_lower(parts[2]) == "yes" ? QALabel::Yes : QALabel::No,
                         std::stod(parts[3])});
    }
    return std::make_unique<MockQaBackend>(std::move(entries));
  }
  throw std::invalid_argument("unknown qa mock script: " + script);
}

}  // namespace salesgen
