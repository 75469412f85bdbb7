#include "ehf/coupling.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "ehf/errors.hpp"

namespace ehf {

namespace {

constexpr std::array<std::pair<std::string_view, Factor>, 6> kFactors{{{"ut", Factor::Ut},
                                                                       {"ur", Factor::Ur},
                                                                       {"vt", Factor::Vt},
                                                                       {"vr", Factor::Vr},
                                                                       {"u", Factor::U},
                                                                       {"v", Factor::V}}};

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Coupling::Term> run() {
    std::vector<Coupling::Term> terms;
    skip();
    if (pos_ == text_.size()) return terms;
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') sign = take() == '-' ? -1.0 : 1.0;
    for (;;) {
      Coupling::Term term = parse_term();
      term.coeff *= sign;
      if (term.coeff != 0.0 || !term.factors.empty()) terms.push_back(std::move(term));
      skip();
      if (pos_ == text_.size()) break;
      const char op = take();
      if (op != '+' && op != '-') fail("expected '+' or '-'");
      sign = op == '-' ? -1.0 : 1.0;
    }
    for (const auto& t : terms) {
      if (t.factors.empty() && t.coeff != 0.0) fail("constant term without a factor");
    }
    std::erase_if(terms, [](const Coupling::Term& t) { return t.coeff == 0.0; });
    return terms;
  }

 private:
  Coupling::Term parse_term() {
    Coupling::Term term;
    term.coeff = 1.0;
    bool any = false;
    for (;;) {
      skip();
      if (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) {
        term.coeff *= parse_number();
      } else {
        const Factor f = parse_factor();
        if (term.factors.size() == 2) fail("more than two factors in one term");
        term.factors.push_back(f);
      }
      any = true;
      skip();
      if (pos_ < text_.size() && peek() == '*') {
        ++pos_;
        continue;
      }
      break;
    }
    if (!any) fail("empty term");
    return term;
  }

  double parse_number() {
    double value = 0.0;
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  Factor parse_factor() {
    for (const auto& [name, f] : kFactors) {
      if (text_.substr(pos_, name.size()) == name) {
        const std::size_t next = pos_ + name.size();
        if (next < text_.size() && std::isalnum(static_cast<unsigned char>(text_[next]))) continue;
        pos_ = next;
        return f;
      }
    }
    fail("unknown factor");
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() const { return text_[pos_]; }
  char take() { return text_[pos_++]; }

  [[noreturn]] void fail(const char* what) const {
    throw ValidationError(std::string("coupling: ") + what + " at offset " + std::to_string(pos_) + " in '" +
                          std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

double CouplingInputs::operator[](Factor f) const noexcept {
  switch (f) {
    case Factor::U:
      return u;
    case Factor::V:
      return v;
    case Factor::Ut:
      return ut;
    case Factor::Ur:
      return ur;
    case Factor::Vt:
      return vt;
    case Factor::Vr:
      return vr;
  }
  return 0.0;
}

std::string_view to_string(Factor f) noexcept {
  for (const auto& [name, g] : kFactors) {
    if (g == f) return name;
  }
  return "?";
}

Coupling Coupling::parse(std::string_view text) { return Coupling(Parser(text).run()); }

double Coupling::operator()(const CouplingInputs& x) const noexcept {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double p = t.coeff;
    for (Factor f : t.factors) p *= x[f];
    sum += p;
  }
  return sum;
}

std::string Coupling::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& t : terms_) {
    char buf[40];
    const bool negative = std::signbit(t.coeff);
    std::snprintf(buf, sizeof buf, "%.17g", std::abs(t.coeff));
    if (out.empty()) {
      if (negative) out += '-';
    } else {
      out += negative ? " - " : " + ";
    }
    out += buf;
    for (Factor f : t.factors) {
      out += '*';
      out += ehf::to_string(f);
    }
  }
  return out;
}

}  // namespace ehf
