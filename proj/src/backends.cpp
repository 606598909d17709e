#include "salesgen/backends.hpp"

namespace salesgen {

std::string to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::Chat: return "CHAT";
    case BackendKind::Qa: return "QA";
    case BackendKind::Paraphrase: return "PARAPHRASE";
    case BackendKind::Seq2Seq: return "SEQ2SEQ";
  }
  return "CHAT";
}

BackendKind backend_kind_from_string(const std::string& s) {
  if (s == "CHAT") return BackendKind::Chat;
  if (s == "QA") return BackendKind::Qa;
  if (s == "PARAPHRASE") return BackendKind::Paraphrase;
  if (s == "SEQ2SEQ") return BackendKind::Seq2Seq;
  throw std::invalid_argument("unknown backend kind: " + s);
}

}  // namespace salesgen
