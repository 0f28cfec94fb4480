#include "cradle/skill/parser.hpp"

#include <cctype>
#include <cstdlib>
#include <sstream>

#include "cradle/core/error.hpp"
#include "cradle/core/text.hpp"

namespace cradle::skill {
namespace {

enum class Tok { ident, number, string, punct, eof };

struct Token {
  Tok type = Tok::eof;
  std::string text;
  double number = 0.0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    std::ostringstream ss;
    ss << "line " << current_.line << ", col " << current_.col << ": expected "
       << expected << ", got ";
    if (current_.type == Tok::eof) ss << "end of input";
    else ss << "'" << current_.text << "'";
    raise(errc::syntax_error, ss.str());
  }

 private:
  void advance() {
    skip_space();
    current_.line = line_;
    current_.col = col_;
    if (pos_ >= text_.size()) {
      current_.type = Tok::eof;
      current_.text.clear();
      return;
    }
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_'))
        bump();
      current_.type = Tok::ident;
      current_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && pos_ + 1 < text_.size() &&
         (std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          text_[pos_ + 1] == '.'))) {
      std::size_t start = pos_;
      bump();
      while (pos_ < text_.size() &&
             (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '.'))
        bump();
      current_.type = Tok::number;
      current_.text = text_.substr(start, pos_ - start);
      current_.number = std::strtod(current_.text.c_str(), nullptr);
      return;
    }
    if (c == '"') {
      bump();
      std::string value;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) {
          bump();
          char e = text_[pos_];
          if (e == 'n') value.push_back('\n');
          else value.push_back(e);
          bump();
        } else {
          value.push_back(text_[pos_]);
          bump();
        }
      }
      if (pos_ >= text_.size()) {
        current_.type = Tok::eof;
        raise(errc::syntax_error,
              "line " + std::to_string(current_.line) + ", col " +
                  std::to_string(current_.col) + ": unterminated string");
      }
      bump();  // closing quote
      current_.type = Tok::string;
      current_.text = value;
      return;
    }
    current_.type = Tok::punct;
    current_.text = std::string(1, c);
    bump();
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') bump();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else {
        break;
      }
    }
  }

  void bump() {
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
  Token current_;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lex_(text) {}

  SkillScript parse_script() {
    expect_keyword("skill");
    SkillScript script;
    script.name = expect_ident("skill name");
    expect_punct("(");
    if (!is_punct(")")) {
      while (true) {
        Param p;
        p.name = expect_ident("parameter name");
        expect_punct(":");
        p.kind = parse_kind();
        script.params.push_back(p);
        if (is_punct(",")) {
          lex_.take();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    expect_keyword("doc");
    if (lex_.peek().type != Tok::string) lex_.fail("doc string");
    script.doc = lex_.take().text;
    if (trim(script.doc).empty()) {
      raise(errc::syntax_error, "line " + std::to_string(lex_.peek().line) +
                                    ": doc string must be non-empty");
    }
    script.body = parse_block();
    if (script.body.empty()) lex_.fail("at least one statement");
    return script;
  }

  bool at_eof() const { return lex_.peek().type == Tok::eof; }

 private:
  std::vector<Statement> parse_block() {
    expect_punct("{");
    std::vector<Statement> stmts;
    while (!is_punct("}")) {
      if (lex_.peek().type == Tok::eof) lex_.fail("'}'");
      stmts.push_back(parse_statement());
    }
    lex_.take();  // '}'
    return stmts;
  }

  Statement parse_statement() {
    Statement s;
    s.line = lex_.peek().line;
    s.col = lex_.peek().col;
    if (lex_.peek().type != Tok::ident) lex_.fail("statement");
    std::string head = lex_.take().text;
    if (head == "repeat") {
      s.kind = Statement::Kind::repeat;
      if (lex_.peek().type != Tok::number) lex_.fail("repeat count");
      Token count = lex_.take();
      s.count = static_cast<std::int64_t>(count.number);
      if (s.count <= 0 || static_cast<double>(s.count) != count.number ||
          s.count > kMaxRepeatCount) {
        raise(errc::repeat_out_of_range,
              "line " + std::to_string(count.line) +
                  ": repeat count must be an integer in [1, " +
                  std::to_string(kMaxRepeatCount) + "]");
      }
      s.body = parse_block();
      if (s.body.empty())
        raise(errc::syntax_error, "line " + std::to_string(s.line) +
                                      ": repeat body must be non-empty");
      return s;
    }
    if (head == "call") {
      s.kind = Statement::Kind::call;
      s.target = expect_ident("callee name");
    } else {
      s.kind = Statement::Kind::primitive;
      s.target = head;
    }
    expect_punct("(");
    if (!is_punct(")")) {
      while (true) {
        s.args.push_back(parse_expr());
        if (is_punct(",")) {
          lex_.take();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    expect_punct(";");
    return s;
  }

  Expr parse_expr() {
    Expr lhs = parse_term();
    if (is_punct("+") || is_punct("-") || is_punct("*") || is_punct("/")) {
      Token op = lex_.take();
      Expr rhs = parse_term();
      Expr out;
      out.line = lhs.line;
      out.col = lhs.col;
      out.node = BinOp{op.text[0], std::make_shared<Expr>(std::move(lhs)),
                       std::make_shared<Expr>(std::move(rhs))};
      return out;
    }
    return lhs;
  }

  Expr parse_term() {
    Expr e;
    e.line = lex_.peek().line;
    e.col = lex_.peek().col;
    const Token& t = lex_.peek();
    if (t.type == Tok::number) {
      e.node = NumberLit{lex_.take().number};
      return e;
    }
    if (t.type == Tok::string) {
      e.node = StringLit{lex_.take().text};
      return e;
    }
    if (t.type == Tok::ident) {
      e.node = ParamRef{lex_.take().text};
      return e;
    }
    if (t.type == Tok::punct && t.text == "(") {
      lex_.take();
      Expr x = parse_expr();
      expect_punct(",");
      Expr y = parse_expr();
      expect_punct(")");
      e.node = PointLit{std::make_shared<Expr>(std::move(x)),
                        std::make_shared<Expr>(std::move(y))};
      return e;
    }
    lex_.fail("expression");
  }

  ParamKind parse_kind() {
    std::string k = expect_ident("parameter kind");
    if (k == "number") return ParamKind::number;
    if (k == "string") return ParamKind::string;
    if (k == "point") return ParamKind::point;
    if (k == "label") return ParamKind::label;
    raise(errc::syntax_error,
          "unknown parameter kind '" + k + "' (number|string|point|label)");
  }

  bool is_punct(const std::string& p) const {
    return lex_.peek().type == Tok::punct && lex_.peek().text == p;
  }

  void expect_punct(const std::string& p) {
    if (!is_punct(p)) lex_.fail("'" + p + "'");
    lex_.take();
  }

  void expect_keyword(const std::string& kw) {
    if (lex_.peek().type != Tok::ident || lex_.peek().text != kw)
      lex_.fail("'" + kw + "'");
    lex_.take();
  }

  std::string expect_ident(const std::string& what) {
    if (lex_.peek().type != Tok::ident) lex_.fail(what);
    return lex_.take().text;
  }

  Lexer lex_;
};

void serialize_expr(std::ostringstream& out, const Expr& e);

void serialize_args(std::ostringstream& out, const std::vector<Expr>& args) {
  out << "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out << ", ";
    serialize_expr(out, args[i]);
  }
  out << ")";
}

void serialize_expr(std::ostringstream& out, const Expr& e) {
  if (const auto* n = std::get_if<NumberLit>(&e.node)) {
    std::ostringstream num;
    num.precision(15);
    num << n->value;
    out << num.str();
  } else if (const auto* s = std::get_if<StringLit>(&e.node)) {
    out << '"';
    for (char c : s->value) {
      if (c == '"' || c == '\\') out << '\\';
      if (c == '\n') {
        out << "\\n";
        continue;
      }
      out << c;
    }
    out << '"';
  } else if (const auto* p = std::get_if<ParamRef>(&e.node)) {
    out << p->name;
  } else if (const auto* pt = std::get_if<PointLit>(&e.node)) {
    out << "(";
    serialize_expr(out, *pt->x);
    out << ", ";
    serialize_expr(out, *pt->y);
    out << ")";
  } else {
    const auto& op = std::get<BinOp>(e.node);
    serialize_expr(out, *op.lhs);
    out << " " << op.op << " ";
    serialize_expr(out, *op.rhs);
  }
}

void serialize_statement(std::ostringstream& out, const Statement& s, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  out << pad;
  switch (s.kind) {
    case Statement::Kind::primitive:
      out << s.target;
      serialize_args(out, s.args);
      out << ";\n";
      break;
    case Statement::Kind::call:
      out << "call " << s.target;
      serialize_args(out, s.args);
      out << ";\n";
      break;
    case Statement::Kind::repeat:
      out << "repeat " << s.count << " {\n";
      for (const auto& inner : s.body) serialize_statement(out, inner, indent + 1);
      out << pad << "}\n";
      break;
  }
}

}  // namespace

SkillScript parse(const std::string& text) {
  Parser parser(text);
  SkillScript script = parser.parse_script();
  return script;
}

std::vector<SkillScript> parse_many(const std::string& text) {
  Parser parser(text);
  std::vector<SkillScript> scripts;
  while (!parser.at_eof()) scripts.push_back(parser.parse_script());
  return scripts;
}

std::string serialize(const SkillScript& script) {
  std::ostringstream out;
  out << "skill " << script.name << "(";
  for (std::size_t i = 0; i < script.params.size(); ++i) {
    if (i) out << ", ";
    out << script.params[i].name << ": " << param_kind_name(script.params[i].kind);
  }
  out << ") doc \"";
  for (char c : script.doc) {
    if (c == '"' || c == '\\') out << '\\';
    if (c == '\n') {
      out << "\\n";
      continue;
    }
    out << c;
  }
  out << "\" {\n";
  for (const auto& s : script.body) serialize_statement(out, s, 1);
  out << "}\n";
  return out.str();
}

std::vector<std::string> extract_code_blocks(const std::string& llm_text) {
  std::vector<std::string> blocks;
  auto lines = split_lines(llm_text);
  bool in_block = false;
  bool block_is_skill = false;
  std::string current;
  for (const auto& line : lines) {
    std::string t = trim(line);
    if (starts_with(t, "```")) {
      if (!in_block) {
        in_block = true;
        block_is_skill = trim(t.substr(3)) == "skill";
        current.clear();
      } else {
        if (block_is_skill) blocks.push_back(current);
        in_block = false;
      }
      continue;
    }
    if (in_block && block_is_skill) {
      current += line;
      current += "\n";
    }
  }
  return blocks;
}

SkillCall parse_call(const std::string& text) {
  try {
    Lexer lex(text);
    SkillCall call;
    if (lex.peek().type != Tok::ident) lex.fail("skill name");
    call.name = lex.take().text;
    if (!(lex.peek().type == Tok::punct && lex.peek().text == "("))
      lex.fail("'('");
    lex.take();
    bool first = true;
    while (!(lex.peek().type == Tok::punct && lex.peek().text == ")")) {
      if (!first) {
        if (!(lex.peek().type == Tok::punct && lex.peek().text == ","))
          lex.fail("','");
        lex.take();
      }
      first = false;
      const Token& t = lex.peek();
      if (t.type == Tok::number) {
        call.args.push_back(Value{lex.take().number});
      } else if (t.type == Tok::string) {
        call.args.push_back(Value{lex.take().text});
      } else if (t.type == Tok::punct && t.text == "(") {
        lex.take();
        if (lex.peek().type != Tok::number) lex.fail("number");
        double x = lex.take().number;
        if (!(lex.peek().type == Tok::punct && lex.peek().text == ","))
          lex.fail("','");
        lex.take();
        if (lex.peek().type != Tok::number) lex.fail("number");
        double y = lex.take().number;
        if (!(lex.peek().type == Tok::punct && lex.peek().text == ")"))
          lex.fail("')'");
        lex.take();
        call.args.push_back(Value{PointVal{x, y}});
      } else {
        lex.fail("literal argument");
      }
    }
    lex.take();  // ')'
    if (lex.peek().type != Tok::eof) lex.fail("end of call");
    return call;
  } catch (const Error& e) {
    if (e.code() == errc::syntax_error)
      raise(errc::malformed_call, std::string("bad skill call: ") + e.what());
    throw;
  }
}

}  // namespace cradle::skill
