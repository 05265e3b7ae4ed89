#include <cctype>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

#include "pws/dsl.hpp"

namespace pws {

namespace {

enum class Tok {
  Ident,
  Colon,
  Arrow,
  Dot,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  LParen,
  RParen,
  Equals,
  Star,
  Pipe,
  Comma,
  Sep,  // newline or ';'
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span{};
};

const std::set<std::string> kKeywords = {
    "interface", "system", "parts", "whole", "initial", "states", "on",   "internal",
    "notify",    "do",     "init",  "holarchy", "root", "INIT",   "NEVER", "LEAVES"};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Expected<std::vector<Token>> run() {
    std::vector<Token> out;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      SourceSpan span{line_, col_};
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (c == ' ' || c == '\t' || c == '\r') {
        advance();
        continue;
      }
      if (c == '\n' || c == ';') {
        out.push_back({Tok::Sep, std::string(1, c), span});
        advance();
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          word += text_[pos_];
          advance();
        }
        out.push_back({Tok::Ident, std::move(word), span});
        continue;
      }
      if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
        advance();
        advance();
        out.push_back({Tok::Arrow, "->", span});
        continue;
      }
      Tok kind;
      switch (c) {
        case ':': kind = Tok::Colon; break;
        case '.': kind = Tok::Dot; break;
        case '{': kind = Tok::LBrace; break;
        case '}': kind = Tok::RBrace; break;
        case '[': kind = Tok::LBracket; break;
        case ']': kind = Tok::RBracket; break;
        case '(': kind = Tok::LParen; break;
        case ')': kind = Tok::RParen; break;
        case '=': kind = Tok::Equals; break;
        case '*': kind = Tok::Star; break;
        case '|': kind = Tok::Pipe; break;
        case ',': kind = Tok::Comma; break;
        default:
          return Error{"lexical-error",
                       "unexpected character '" + printable(c) + "'", span};
      }
      out.push_back({kind, std::string(1, c), span});
      advance();
    }
    out.push_back({Tok::End, "", {line_, col_}});
    return out;
  }

 private:
  static std::string printable(char c) {
    if (c >= 0x20 && c < 0x7f) return std::string(1, c);
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\x%02x", static_cast<unsigned char>(c));
    return buf;
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  ParseResult run() {
    ParseResult result;
    SourceModel out;
    skip_seps();
    while (!at(Tok::End)) {
      if (!parse_decl(out)) {
        result.errors = std::move(errors_);
        return result;
      }
      skip_seps();
    }
    result.model = std::move(out);
    return result;
  }

 private:
  const Token& peek(int ahead = 0) const {
    std::size_t i = pos_ + ahead;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  bool at(Tok k) const { return peek().kind == k; }
  Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  void skip_seps() {
    while (at(Tok::Sep)) take();
  }

  bool fail(const std::string& message, SourceSpan span) {
    errors_.push_back({"syntax-error", message, span});
    return false;
  }

  bool expect(Tok k, const std::string& what, Token* out = nullptr) {
    if (!at(k)) return fail("expected " + what + ", got '" + peek().text + "'", peek().span);
    Token t = take();
    if (out) *out = std::move(t);
    return true;
  }

  // Identifier usable as a name; keywords are reserved.
  bool name(std::string* out, SourceSpan* span = nullptr) {
    if (!at(Tok::Ident))
      return fail("expected identifier, got '" + peek().text + "'", peek().span);
    if (kKeywords.count(peek().text))
      return fail("keyword '" + peek().text + "' cannot be used as a name", peek().span);
    Token t = take();
    if (span) *span = t.span;
    *out = std::move(t.text);
    return true;
  }

  bool keyword(const std::string& kw) {
    if (!(at(Tok::Ident) && peek().text == kw))
      return fail("expected '" + kw + "', got '" + peek().text + "'", peek().span);
    take();
    return true;
  }

  bool at_keyword(const std::string& kw) const {
    return peek().kind == Tok::Ident && peek().text == kw;
  }

  bool end_statement() {
    if (at(Tok::Sep)) {
      skip_seps();
      return true;
    }
    if (at(Tok::RBrace) || at(Tok::End)) return true;
    return fail("expected end of statement, got '" + peek().text + "'", peek().span);
  }

  bool parse_decl(SourceModel& out) {
    if (at_keyword("interface")) return parse_interface(out);
    if (at_keyword("system")) return parse_system(out);
    if (at_keyword("holarchy")) return parse_holarchy(out);
    if (at_keyword("INIT") || at_keyword("NEVER") || at_keyword("LEAVES"))
      return parse_property(out);
    return fail("expected a declaration, got '" + peek().text + "'", peek().span);
  }

  bool parse_interface(SourceModel& out) {
    StateInterface itf;
    itf.span = peek().span;
    keyword("interface");
    if (!name(&itf.name)) return false;
    if (!expect(Tok::LBrace, "'{'")) return false;
    skip_seps();
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) return fail("unterminated interface block", itf.span);
      if (at_keyword("initial")) {
        take();
        if (!name(&itf.initial)) return false;
      } else if (at_keyword("states")) {
        take();
        std::string q;
        if (!name(&q)) return false;
        itf.states.push_back(q);
        while (at(Tok::Ident) && !kKeywords.count(peek().text)) {
          itf.states.push_back(take().text);
        }
      } else {
        InterfaceTransition t;
        if (!parse_interface_transition(&t)) return false;
        itf.transitions.push_back(std::move(t));
      }
      if (!end_statement()) return false;
    }
    take();  // }
    out.model.interfaces.push_back(std::move(itf));
    return true;
  }

  bool parse_interface_transition(InterfaceTransition* t) {
    t->span = peek().span;
    if (!name(&t->id)) return false;
    if (!expect(Tok::Colon, "':'")) return false;
    if (!name(&t->source)) return false;
    if (!expect(Tok::Arrow, "'->'")) return false;
    if (!name(&t->target)) return false;
    if (at_keyword("on")) {
      take();
      t->kind = TriggerKind::Command;
      if (!name(&t->event)) return false;
    } else if (at_keyword("internal")) {
      take();
      t->kind = TriggerKind::Internal;
      if (!name(&t->event)) return false;
    } else {
      return fail("expected 'on' or 'internal', got '" + peek().text + "'", peek().span);
    }
    if (at_keyword("notify")) {
      take();
      std::string n;
      if (!name(&n)) return false;
      t->notifies.push_back(n);
      while (at(Tok::Ident) && !kKeywords.count(peek().text)) t->notifies.push_back(take().text);
    }
    return true;
  }

  bool parse_system(SourceModel& out) {
    PwsSystem sys;
    sys.span = peek().span;
    keyword("system");
    if (!name(&sys.name)) return false;
    if (!expect(Tok::LBrace, "'{'")) return false;
    skip_seps();

    if (!keyword("parts")) return false;
    if (!expect(Tok::LBrace, "'{'")) return false;
    skip_seps();
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) return fail("unterminated parts block", sys.span);
      PartSlot slot;
      slot.span = peek().span;
      if (!name(&slot.id)) return false;
      if (!expect(Tok::Colon, "':'")) return false;
      if (!name(&slot.interface_name)) return false;
      if (at_keyword("init")) {
        take();
        std::string s;
        if (!name(&s)) return false;
        slot.initial_override = s;
      }
      sys.assembly.push_back(std::move(slot));
      if (!end_statement()) return false;
    }
    take();  // }
    skip_seps();

    if (!keyword("whole")) return false;
    if (!expect(Tok::LBrace, "'{'")) return false;
    skip_seps();
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) return fail("unterminated whole block", sys.span);
      if (at_keyword("initial")) {
        take();
        if (!name(&sys.initial_whole)) return false;
      } else if (at_keyword("states")) {
        take();
        std::string q;
        if (!name(&q)) return false;
        sys.whole_states.push_back(q);
        while (at(Tok::Ident) && !kKeywords.count(peek().text))
          sys.whole_states.push_back(take().text);
      } else {
        WholeTransition t;
        if (!parse_whole_transition(&t)) return false;
        sys.whole_transitions.push_back(std::move(t));
      }
      if (!end_statement()) return false;
    }
    take();  // }
    skip_seps();
    if (!expect(Tok::RBrace, "'}'")) return false;
    out.model.systems.push_back(std::move(sys));
    return true;
  }

  bool parse_whole_transition(WholeTransition* t) {
    t->span = peek().span;
    if (!name(&t->id)) return false;
    if (!expect(Tok::Colon, "':'")) return false;
    if (!name(&t->source)) return false;
    if (!expect(Tok::Arrow, "'->'")) return false;
    if (!name(&t->target)) return false;

    if (at_keyword("on")) {
      take();
      std::string first;
      if (!name(&first)) return false;
      if (at(Tok::Dot)) {
        take();
        t->trigger.kind = WholeTriggerKind::PartNotification;
        t->trigger.part = first;
        if (!name(&t->trigger.event)) return false;
      } else {
        t->trigger.kind = WholeTriggerKind::ExternalCommand;
        t->trigger.event = first;
      }
    } else if (at_keyword("internal")) {
      take();
      t->trigger.kind = WholeTriggerKind::Internal;
      if (!name(&t->trigger.event)) return false;
    } else {
      return fail("expected 'on' or 'internal', got '" + peek().text + "'", peek().span);
    }

    if (at(Tok::LBracket)) {
      GuardPattern g;
      if (!parse_pattern(&g, Tok::RBracket, "']'")) return false;
      t->guard = std::move(g);
    }

    if (at_keyword("do")) {
      take();
      while (true) {
        CommandAction cmd;
        if (!name(&cmd.part)) return false;
        if (!expect(Tok::Dot, "'.'")) return false;
        if (!name(&cmd.event)) return false;
        t->commands.push_back(std::move(cmd));
        if (!(at(Tok::Ident) && !kKeywords.count(peek().text) && peek(1).kind == Tok::Dot)) break;
      }
    }

    if (at_keyword("notify")) {
      take();
      std::string n;
      if (!name(&n)) return false;
      t->notifies.push_back(n);
      while (at(Tok::Ident) && !kKeywords.count(peek().text)) t->notifies.push_back(take().text);
    }
    return true;
  }

  // Pattern between an already-seen opening token and `close`.
  bool parse_pattern(GuardPattern* g, Tok close, const std::string& close_text) {
    take();  // opening bracket or paren
    while (true) {
      GuardClause clause;
      while (true) {
        GuardAtom atom;
        if (!name(&atom.slot)) return false;
        if (!expect(Tok::Equals, "'='")) return false;
        if (at(Tok::Star)) {
          take();
          atom.state = "*";
        } else if (!name(&atom.state)) {
          return false;
        }
        clause.atoms.push_back(std::move(atom));
        if (at(Tok::Comma)) {
          take();
          continue;
        }
        break;
      }
      g->clauses.push_back(std::move(clause));
      if (at(Tok::Pipe)) {
        take();
        continue;
      }
      break;
    }
    return expect(close, close_text);
  }

  bool parse_holarchy(SourceModel& out) {
    HolarchyDecl h;
    h.span = peek().span;
    keyword("holarchy");
    if (!name(&h.name)) return false;
    if (!expect(Tok::LBrace, "'{'")) return false;
    skip_seps();
    if (!keyword("root")) return false;
    if (!name(&h.root_system)) return false;
    if (at(Tok::LBrace)) {
      if (!parse_binding_block(&h.bindings)) return false;
    }
    skip_seps();
    if (!expect(Tok::RBrace, "'}'")) return false;
    out.holarchies.push_back(std::move(h));
    return true;
  }

  bool parse_binding_block(std::vector<BindingDecl>* out) {
    take();  // {
    skip_seps();
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) return fail("unterminated binding block", peek().span);
      BindingDecl b;
      b.span = peek().span;
      if (!name(&b.slot)) return false;
      if (!expect(Tok::Colon, "':'")) return false;
      if (!name(&b.target)) return false;
      if (at(Tok::LBrace)) {
        if (!parse_binding_block(&b.children)) return false;
      }
      out->push_back(std::move(b));
      if (!end_statement()) return false;
    }
    take();  // }
    return true;
  }

  bool parse_property(SourceModel& out) {
    PropertyDecl decl;
    decl.span = peek().span;
    std::string kw = take().text;
    if (kw == "LEAVES") {
      decl.property.kind = PropertyKind::Leaves;
      if (!name(&decl.property.slot)) return false;
      if (!expect(Tok::Dot, "'.'")) return false;
      if (!name(&decl.property.state)) return false;
    } else {
      decl.property.kind = kw == "INIT" ? PropertyKind::Init : PropertyKind::Never;
      if (!at(Tok::LParen))
        return fail("expected '(' after " + kw + ", got '" + peek().text + "'", peek().span);
      if (!parse_pattern(&decl.property.pattern, Tok::RParen, "')'")) return false;
    }
    if (!end_statement()) return false;
    out.properties.push_back(std::move(decl));
    return true;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<Error> errors_;
};

// Name resolution for holarchy declarations; full shape checking happens at
// bind time.
void resolve_holarchies(const SourceModel& m, std::vector<Error>* errors) {
  std::set<std::string> names;
  for (const auto& h : m.holarchies) {
    if (!names.insert(h.name).second)
      errors->push_back({"reference-error", "holarchy '" + h.name + "' declared twice", h.span});
    const PwsSystem* root = m.model.find_system(h.root_system);
    if (!root) {
      errors->push_back(
          {"reference-error", "root system '" + h.root_system + "' is not defined", h.span});
      continue;
    }
    std::function<void(const PwsSystem&, const std::vector<BindingDecl>&)> walk =
        [&](const PwsSystem& sys, const std::vector<BindingDecl>& bindings) {
          for (const auto& b : bindings) {
            if (!sys.find_slot(b.slot))
              errors->push_back({"reference-error",
                                 "system '" + sys.name + "' has no slot '" + b.slot + "'",
                                 b.span});
            const PwsSystem* child = m.model.find_system(b.target);
            if (child) {
              walk(*child, b.children);
              continue;
            }
            if (!m.model.find_interface(b.target))
              errors->push_back({"reference-error",
                                 "binding target '" + b.target +
                                     "' is neither a system nor an interface",
                                 b.span});
            else if (!b.children.empty())
              errors->push_back({"reference-error",
                                 "leaf binding '" + b.slot + "' cannot have nested bindings",
                                 b.span});
          }
        };
    walk(*root, h.bindings);
  }
}

}  // namespace

ParseResult parse_model(const std::string& text) {
  Lexer lexer(text);
  auto tokens = lexer.run();
  if (!tokens.ok()) {
    ParseResult r;
    r.errors.push_back(tokens.error());
    return r;
  }
  ParseResult result = Parser(std::move(tokens.value())).run();
  if (!result.model) return result;

  ValidationReport validation = validate_model(result.model->model);
  for (const auto& v : validation.violations)
    result.errors.push_back({v.code, v.message + " (" + v.where + ")", v.span});
  resolve_holarchies(*result.model, &result.errors);
  if (!result.errors.empty()) result.model.reset();
  return result;
}

PropertiesResult parse_properties(const std::string& text, const Model& model,
                                  const PwsSystem& context) {
  PropertiesResult out;
  ParseResult parsed = parse_model(text);
  if (!parsed.ok()) {
    out.errors = std::move(parsed.errors);
    return out;
  }
  const SourceModel& m = *parsed.model;
  if (!m.model.interfaces.empty() || !m.model.systems.empty() || !m.holarchies.empty())
    out.errors.push_back(
        {"syntax-error", "property text must contain only INIT/NEVER/LEAVES lines"});

  auto check_slot_state = [&](const std::string& slot, const std::string& state,
                              SourceSpan span) {
    const PartSlot* s = context.find_slot(slot);
    if (!s) {
      out.errors.push_back(
          {"reference-error", "system '" + context.name + "' has no slot '" + slot + "'", span});
      return;
    }
    if (state == "*") return;
    const StateInterface* itf = model.find_interface(s->interface_name);
    if (itf && !itf->has_state(state))
      out.errors.push_back({"reference-error",
                            "interface '" + itf->name + "' has no state '" + state + "'", span});
  };

  for (const auto& decl : m.properties) {
    if (decl.property.kind == PropertyKind::Leaves) {
      check_slot_state(decl.property.slot, decl.property.state, decl.span);
    } else {
      for (const auto& clause : decl.property.pattern.clauses)
        for (const auto& atom : clause.atoms) check_slot_state(atom.slot, atom.state, decl.span);
    }
    out.properties.push_back(decl.property);
  }
  if (!out.errors.empty()) out.properties.clear();
  return out;
}

}  // namespace pws
